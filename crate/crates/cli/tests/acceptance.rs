use std::path::PathBuf;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use lipdouble::closure::{
    closure_membership_ideal, closure_membership_module, dependence_search, monomial_closure, newton_test,
    verify_verdict, Certificate, ClosureOptions, ClosureVerdict, DependenceBounds, DependenceOutcome, NewtonTest,
    Status, Strategy,
};
use lipdouble::curvefam::{chain_rule_check, cramer_field, implicitize, normal_form, verify_cramer, CurveFamilyParam};
use lipdouble::double::{double_element, double_module, offdiagonal_block_rank, Basis, DoubleMode};
use lipdouble::equising::{
    check_ila, check_ilmy, check_w, grassmann_identities, grassmann_modification, wh_euler_fastpath, Evidence,
    IlmyVariant, WeightVector,
};
use lipdouble::exactalg::rat;
use lipdouble::groebner::{ideal_membership, submodule_membership};
use lipdouble::modulealg::{cosupport_ideal, generic_rank, rank_at_point, ModulePresentation, RingContext, VarietyFamily};
use lipdouble::{BiSeries, Error, Poly, PolyMatrix, Rational};

type Outcome = Result<(), String>;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Outcome {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn module(z: &[&str], relations: &[&str], rank: usize, cols: &[Vec<&str>]) -> ModulePresentation {
    let ctx = RingContext::new(z, &[]).unwrap();
    let rels = relations.iter().map(|r| ctx.parse(r).unwrap()).collect();
    let ctx = ctx.with_relations(rels).unwrap();
    ModulePresentation::parse(ctx, rank, cols).unwrap()
}

/// Irreducible fixtures used by the basis and rank criteria.
fn fixtures() -> Vec<(&'static str, ModulePresentation)> {
    vec![
        ("<(z)> on C", module(&["z"], &[], 1, &[vec!["z"]])),
        ("J(z1^2+z2^2+z3^2) on X", module(&["z1", "z2", "z3"], &["z1^2 + z2^2 + z3^2"], 1, &[vec!["2*z1"], vec!["2*z2"], vec!["2*z3"]])),
        ("J(z1^2+z2^2+z3^2) on C^3", module(&["z1", "z2", "z3"], &[], 1, &[vec!["2*z1"], vec!["2*z2"], vec!["2*z3"]])),
        ("<(z1,0),(0,z1)>", module(&["z1", "z2"], &[], 2, &[vec!["z1", "0"], vec!["0", "z1"]])),
        ("<(z1^2,0),(z2^2,0),(0,1)>", module(&["z1", "z2"], &[], 2, &[vec!["z1^2", "0"], vec!["z2^2", "0"], vec!["0", "1"]])),
        ("J_z of the cusp z1^2 = z2^3", module(&["z1", "z2"], &["z1^2 - z2^3"], 1, &[vec!["2*z1"], vec!["-3*z2^2"]])),
    ]
}

fn criterion_1() -> Outcome {
    let fx = fixtures();
    ensure(fx.len() >= 5, || "too few fixtures".into())?;
    for (name, m) in &fx {
        let bases = [Basis::B, Basis::BPrime, Basis::BDoublePrime];
        let doubled: Vec<_> = bases.iter().map(|&b| double_module(m, DoubleMode::Absolute, b).unwrap()).collect();
        let ctx = doubled[0].product.context();
        let rels = ctx.relations().to_vec();
        for a in &doubled {
            for b in &doubled {
                if a.basis == b.basis {
                    continue;
                }
                for g in a.module.generators() {
                    let mem = submodule_membership(ctx.nvars(), g, b.module.generators(), &rels).map_err(|e| e.to_string())?;
                    ensure(mem.is_member(), || format!("{name}: a {} generator is outside {}", a.basis.tag(), b.basis.tag()))?;
                }
            }
        }
    }
    Ok(())
}

fn criterion_2() -> Outcome {
    for (name, m) in fixtures() {
        let k = generic_rank(&m).map_err(|e| e.to_string())?;
        for mode in [DoubleMode::Absolute, DoubleMode::Relative] {
            let d = double_module(&m, mode, Basis::B).unwrap();
            let kd = generic_rank(&d.module).map_err(|e| e.to_string())?;
            ensure(kd == 2 * k, || format!("{name}: generic rank {k}, doubled {kd}"))?;
        }
    }
    Ok(())
}

fn points(rng: &mut ChaCha8Rng, n: usize, count: usize, sigma: &[Vec<i64>]) -> Vec<Vec<i64>> {
    let mut out: Vec<Vec<i64>> = sigma.to_vec();
    while out.len() < count {
        out.push((0..n).map(|_| rng.gen_range(-3..=3)).collect());
    }
    out
}

fn to_q(p: &[i64]) -> Vec<Rational> {
    p.iter().map(|&x| rat(x)).collect()
}

fn criterion_3() -> Outcome {
    let m = module(&["z"], &[], 1, &[vec!["z"]]);
    let d = double_module(&m, DoubleMode::Absolute, Basis::B).unwrap();
    let (k, j) = cosupport_ideal(&d.module).map_err(|e| e.to_string())?;
    ensure(k == 2, || format!("doubled rank {k}"))?;
    let ctx = d.product.context();
    let expected = ctx.parse("z_1*z_2*(z_1 - z_2)").unwrap();
    let nv = ctx.nvars();
    let fwd = ideal_membership(nv, &expected, j.generators(), &[]).map_err(|e| e.to_string())?;
    ensure(fwd.is_member(), || format!("z'z''(z'-z'') not in J_2 = {:?}", j.render()))?;
    for g in j.generators() {
        let back = ideal_membership(nv, g, &[expected.clone()], &[]).map_err(|e| e.to_string())?;
        ensure(back.is_member(), || format!("{} not in (z'z''(z'-z''))", ctx.render(g)))?;
    }

    // rank M_D(x, x') < 2k exactly on the diagonal and over Σ(M) in either factor
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let union_fixtures: Vec<(ModulePresentation, Vec<Vec<i64>>)> = vec![
        (module(&["z"], &[], 1, &[vec!["z"]]), vec![vec![0]]),
        (module(&["z1", "z2"], &[], 1, &[vec!["z1"], vec!["z2"]]), vec![vec![0, 0]]),
        (module(&["z1", "z2"], &[], 2, &[vec!["z1", "0"], vec!["0", "z1"]]), vec![vec![0, 0], vec![0, 2]]),
        (module(&["z1", "z2", "z3"], &[], 1, &[vec!["2*z1"], vec!["2*z2"], vec!["2*z3"]]), vec![vec![0, 0, 0]]),
    ];
    for (m, sigma) in &union_fixtures {
        let n = m.context().nvars();
        let k = generic_rank(m).map_err(|e| e.to_string())?;
        let d = double_module(m, DoubleMode::Absolute, Basis::B).unwrap();
        let pts = points(&mut rng, n, 8, sigma);
        for x in &pts {
            for x2 in &pts {
                let (qx, qx2) = (to_q(x), to_q(x2));
                let pt = d.product.point(&qx, &qx2).map_err(|e| e.to_string())?;
                let rd = rank_at_point(&d.module, &pt).map_err(|e| e.to_string())?;
                let in_sigma = |p: &[Rational]| rank_at_point(m, p).map(|r| r < k);
                let predicted = x == x2 || in_sigma(&qx).map_err(|e| e.to_string())? || in_sigma(&qx2).map_err(|e| e.to_string())?;
                ensure((rd < 2 * k) == predicted, || format!("rank {rd} at ({x:?}, {x2:?}) against the union formula"))?;
            }
        }
    }
    Ok(())
}

fn status_at(h: &[Poly], m: &ModulePresentation, pt: Vec<Rational>) -> Result<ClosureVerdict, String> {
    let o = ClosureOptions { point: Some(pt), ..Default::default() };
    let v = closure_membership_module(h, m, &o).map_err(|e| e.to_string())?;
    if v.status != Status::Inconclusive && !verify_verdict(&v).unwrap_or(false) {
        return Err(format!("certificate does not verify: {v:?}"));
    }
    Ok(v)
}

fn criterion_4() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let additivity = [
        module(&["z1", "z2"], &[], 1, &[vec!["z1"], vec!["z2"]]),
        module(&["z1", "z2"], &[], 2, &[vec!["z1", "0"], vec!["0", "z1"]]),
        module(&["z1", "z2", "z3"], &[], 1, &[vec!["2*z1"], vec!["2*z2"], vec!["2*z3"]]),
        module(&["z1", "z2"], &[], 2, &[vec!["z1^2", "0"], vec!["z2^2", "0"], vec!["0", "z1*z2"]]),
    ];
    for m in &additivity {
        let n = m.context().nvars();
        let mut pairs = 0;
        while pairs < 24 {
            let x: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            let x2: Vec<i64> = (0..n).map(|_| rng.gen_range(-2..=2)).collect();
            if x == x2 {
                continue;
            }
            pairs += 1;
            let (r1, r2, rd) = offdiagonal_block_rank(m, DoubleMode::Absolute, &to_q(&x), &to_q(&x2)).map_err(|e| e.to_string())?;
            ensure(rd == r1 + r2, || format!("rD = {rd}, r1 + r2 = {} at ({x:?}, {x2:?})", r1 + r2))?;
        }
    }

    let cases: Vec<(ModulePresentation, Vec<&str>, Vec<Vec<i64>>)> = vec![
        (module(&["z1", "z2"], &[], 1, &[vec!["z1^2"], vec!["z2^2"]]), vec!["z1*z2"], vec![vec![0, 0], vec![1, 2], vec![0, 1]]),
        (module(&["z1", "z2"], &[], 1, &[vec!["z1^2"], vec!["z2^2"]]), vec!["z1"], vec![vec![0, 0], vec![1, 1], vec![2, 0]]),
        (module(&["z1", "z2"], &[], 2, &[vec!["z1", "0"], vec!["0", "z1"]]), vec!["z2", "0"], vec![vec![0, 0], vec![1, 0], vec![0, 3]]),
        (module(&["z"], &[], 1, &[vec!["z^2"]]), vec!["z^3"], vec![vec![0], vec![1]]),
    ];
    let mut implications = 0;
    for (m, h, pts) in &cases {
        let ctx = m.context();
        let h: Vec<Poly> = h.iter().map(|s| ctx.parse(s).unwrap()).collect();
        let d = double_module(m, DoubleMode::Absolute, Basis::B).unwrap();
        let hd = double_element(&h, &d.product);
        for x in pts {
            for x2 in pts {
                let pt = d.product.point(&to_q(x), &to_q(x2)).map_err(|e| e.to_string())?;
                let dv = status_at(&hd, &d.module, pt)?;
                if dv.status != Status::Holds {
                    continue;
                }
                implications += 1;
                for p in [x, x2] {
                    let v = status_at(&h, m, to_q(p))?;
                    ensure(v.status == Status::Holds, || format!("doubled Holds at ({x:?}, {x2:?}) but {} at {p:?}", v.status))?;
                }
            }
        }
    }
    ensure(implications > 0, || "no doubled Holds verdict was produced".into())
}

fn monomial(ctx: &RingContext, e: &[u32]) -> Poly {
    ctx.parse(&format!("x^{}*y^{}", e[0], e[1])).unwrap()
}

fn criterion_5() -> Outcome {
    let ctx = RingContext::new(&["x", "y"], &[]).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let bounds = DependenceBounds { max_m: 4, max_deg: 12, max_unknowns: 4000 };
    let arcs = ClosureOptions { strategy: Strategy::Arcs, ..Default::default() };
    let mut inside = 0;
    let mut outside = 0;
    for _ in 0..24 {
        let ngens = rng.gen_range(2..=3);
        let exps: Vec<Vec<u32>> = (0..ngens)
            .map(|_| {
                let d = rng.gen_range(1..=6u32);
                let a = rng.gen_range(0..=d);
                vec![a, d - a]
            })
            .collect();
        let gens: Vec<Poly> = exps.iter().map(|e| monomial(&ctx, e)).collect();
        let ideal = lipdouble::modulealg::Ideal::new(ctx.clone(), gens.clone()).unwrap();
        for _ in 0..2 {
            let d = rng.gen_range(1..=6u32);
            let a = rng.gen_range(0..=d);
            let alpha = vec![a, d - a];
            let f = monomial(&ctx, &alpha);
            let newton = newton_test(&exps, &alpha);
            let dep = dependence_search(&f, &gens, &[], &bounds).map_err(|e| e.to_string())?;
            let arc = closure_membership_ideal(&f, &ideal, &arcs).map_err(|e| e.to_string())?;
            if arc.status != Status::Inconclusive {
                ensure(verify_verdict(&arc).unwrap_or(false), || format!("arc certificate for {alpha:?}"))?;
            }
            if let DependenceOutcome::Found(c) = &dep {
                ensure(c.verify(&f, &gens, &[]).unwrap_or(false), || format!("dependence certificate for {alpha:?}"))?;
            }
            match newton {
                NewtonTest::Inside { .. } => {
                    inside += 1;
                    ensure(arc.status != Status::Fails, || format!("arc refutes {alpha:?} inside the polyhedron of {exps:?}"))?;
                }
                NewtonTest::Outside { .. } => {
                    outside += 1;
                    ensure(!matches!(dep, DependenceOutcome::Found(_)), || format!("dependence for {alpha:?} outside {exps:?}"))?;
                    ensure(arc.status != Status::Holds, || format!("arcs claim {alpha:?} outside {exps:?}"))?;
                }
            }
            ensure(!(matches!(dep, DependenceOutcome::Found(_)) && arc.status == Status::Fails), || format!("{alpha:?} vs {exps:?}"))?;
        }
    }
    ensure(inside > 0 && outside > 0, || format!("degenerate sample: {inside} inside, {outside} outside"))?;

    let closure = monomial_closure(2, &[ctx.parse("x^3").unwrap(), ctx.parse("y^3").unwrap()]).map_err(|e| e.to_string())?;
    let mut got: Vec<String> = closure.iter().map(|p| ctx.render(p)).collect();
    got.sort();
    let mut want: Vec<String> = ["x^3", "x^2*y", "x*y^2", "y^3"].iter().map(|s| ctx.render(&ctx.parse(s).unwrap())).collect();
    want.sort();
    ensure(got == want, || format!("closure of (x^3, y^3) = {got:?}"))
}

fn contains_dependence(c: &Certificate) -> bool {
    match c {
        Certificate::Dependence(_) => true,
        Certificate::Minors { verdicts, .. } => verdicts.iter().any(|v| contains_dependence(&v.certificate)),
        _ => false,
    }
}

fn criterion_6() -> Outcome {
    let z = RingContext::new(&["z1", "z2"], &[]).unwrap();
    let m = ModulePresentation::parse(z.clone(), 2, &[vec!["z1", "0"], vec!["0", "z1"]]).unwrap();
    let h = vec![z.parse("z2").unwrap(), z.zero()];
    let v = closure_membership_module(&h, &m, &ClosureOptions::default()).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Fails, || format!("(z2, 0): {}", v.status))?;
    ensure(matches!(v.certificate, Certificate::Arc { .. }), || format!("(z2, 0): {} certificate", v.certificate.kind()))?;
    ensure(verify_verdict(&v).unwrap_or(false), || "(z2, 0): arc certificate does not verify".into())?;

    let m = ModulePresentation::parse(z.clone(), 2, &[vec!["z1^2", "0"], vec!["z2^2", "0"], vec!["0", "1"]]).unwrap();
    let h = vec![z.parse("z1*z2").unwrap(), z.zero()];
    let dep = ClosureOptions { strategy: Strategy::Dependence, ..Default::default() };
    let v = closure_membership_module(&h, &m, &dep).map_err(|e| e.to_string())?;
    ensure(v.status == Status::Holds, || format!("(z1*z2, 0): {}", v.status))?;
    ensure(contains_dependence(&v.certificate), || format!("(z1*z2, 0): {} certificate", v.certificate.kind()))?;
    ensure(verify_verdict(&v).unwrap_or(false), || "(z1*z2, 0): certificate does not verify".into())?;
    let auto = closure_membership_module(&h, &m, &ClosureOptions::default()).map_err(|e| e.to_string())?;
    ensure(auto.status == Status::Holds && verify_verdict(&auto).unwrap_or(false), || "(z1*z2, 0) default strategy".into())
}

fn criterion_7() -> Outcome {
    let o = ClosureOptions::default();
    let families = ["z1^2 + z2^3 + t*z2^2", "z1^2 + z2^3", "z1^2 + z2^3 + t*z2^3", "z1^2 + (1 + t)*z2^2"];
    let mut saw_mandatory_fail = false;
    for src in families {
        let fam = VarietyFamily::parse(&["z1", "z2"], &["t"], &[src]).unwrap();
        let w = check_w(&fam, None, &o).map_err(|e| e.to_string())?;
        let ila = check_ila(&fam, None, &o).map_err(|e| e.to_string())?;
        let ilmy = match check_ilmy(&fam, None, IlmyVariant::Full, &o) {
            Ok(r) => r,
            Err(Error::Internal(e)) => return Err(format!("{src}: projection variants contradict: {e}")),
            Err(e) => return Err(e.to_string()),
        };
        for r in std::iter::once(&w).chain([&ila]).chain(ilmy.iter()) {
            ensure(r.verify().unwrap_or(false), || format!("{src}: {:?} report does not verify", r.condition))?;
        }
        let statuses: Vec<Status> = ilmy.iter().map(|r| r.aggregate).collect();
        ensure(!(statuses.contains(&Status::Holds) && statuses.contains(&Status::Fails)), || format!("{src}: variants {statuses:?}"))?;
        if statuses.contains(&Status::Holds) {
            ensure(ila.aggregate == Status::Holds, || format!("{src}: iL_mY Holds but iL_A {}", ila.aggregate))?;
        }
        if w.aggregate == Status::Fails {
            ensure(!statuses.contains(&Status::Holds), || format!("{src}: W Fails but iL_mY Holds"))?;
        }
        if src == families[0] {
            saw_mandatory_fail = w.aggregate == Status::Fails;
        }
    }
    ensure(saw_mandatory_fail, || "W does not fail for z1^2 + z2^3 + t*z2^2".into())
}

fn criterion_8() -> Outcome {
    let o = ClosureOptions::default();
    let fam = VarietyFamily::parse(&["z1", "z2"], &["t"], &["z1^2 + z2^3 + t*z2^2"]).unwrap();
    let w = WeightVector { z: vec![3, 2], y: vec![2], degrees: vec![6] };
    for t in [1, -2, 5] {
        let r = wh_euler_fastpath(&fam, &w, &[rat(0), rat(0), rat(t)], &o).map_err(|e| e.to_string())?;
        ensure(r.aggregate == Status::Holds, || format!("t = {t}: {}", r.aggregate))?;
        for g in &r.generators {
            match &g.certificate {
                Evidence::Euler(c) => ensure(c.verify().unwrap_or(false), || format!("t = {t}: Euler identity fails"))?,
                e => return Err(format!("t = {t}: not an Euler certificate: {e:?}")),
            }
        }
    }
    let fam = VarietyFamily::parse(&["z1", "z2"], &["t"], &["z1^4 + z2^4 + t*z1^2*z2^2"]).unwrap();
    let w = WeightVector { z: vec![1, 1], y: vec![0], degrees: vec![4] };
    match wh_euler_fastpath(&fam, &w, &[rat(0), rat(0), rat(1)], &o) {
        Err(Error::FastPathInapplicable(m)) => {
            for eq in ["4*a1 + c1 = 0", "4*a2 + c1 = 0", "2*t*a1 + 2*t*a2 + t*c1 = 1"] {
                ensure(m.contains(eq), || format!("rejection does not show `{eq}`: {m}"))?;
            }
            Ok(())
        }
        other => Err(format!("weight-zero family not rejected: {other:?}")),
    }
}

fn criterion_9() -> Outcome {
    let inputs: [(&[&str], &str); 4] = [
        (&["z1", "z2"], "z1^2 + z2^3"),
        (&["z1", "z2", "z3"], "z1*z2 + z3^2"),
        (&["z1", "z2", "z3"], "z1^3 + z2^2*z3 + z3^4 - z1*z2*z3"),
        (&["z1", "z2"], "z1^5 - 3*z1*z2^4 + z2^2"),
    ];
    for (vars, src) in inputs {
        let ctx = RingContext::new(vars, &[]).unwrap();
        let f = ctx.parse(src).unwrap();
        let m = grassmann_modification(&ctx, std::slice::from_ref(&f)).map_err(|e| e.to_string())?;
        let big = m.family.context();
        let n = vars.len();
        let big_f = &m.family.map()[0];
        let df_n = f.differentiate(n - 1).compose(&m.beta, big.nvars());
        for i in 0..n - 1 {
            let lhs = big_f.differentiate(n + i);
            let rhs = &big.var(i) * &df_n;
            ensure(lhs == rhs, || format!("{src}: dF/dy{} = {} but z{} (df/dz{n})∘β = {}", i + 1, big.render(&lhs), i + 1, big.render(&rhs)))?;
        }
        ensure(big_f.differentiate(n - 1).is_zero(), || format!("{src}: dF/dz{n} is not zero"))?;
        let checks = grassmann_identities(&m).map_err(|e| e.to_string())?;
        ensure(checks.iter().all(|c| c.holds), || format!("{src}: recorded identity fails"))?;
    }
    Ok(())
}

fn ts(src: &str) -> Poly {
    Poly::parse(src, &["t".to_string(), "s".to_string()]).unwrap()
}

fn criterion_10() -> Outcome {
    let param = CurveFamilyParam::from_polys(vec![ts("s^3 + t*s^4"), ts("s^2")], 50).map_err(|e| e.to_string())?;
    let imp = implicitize(&param).map_err(|e| e.to_string())?;
    let expected = imp.ctx.parse("(z1 - t*z2^2)^2 - z2^3").unwrap();
    ensure(imp.generators.len() == 1 && imp.generators[0].primitive() == expected.primitive(), || format!("G = {:?}", imp.render()))?;

    let g = &imp.generators[0];
    let t = imp.t();
    let rel_ctx = imp.ctx.clone().with_relations(vec![g.clone()]).map_err(|e| e.to_string())?;
    let mk = PolyMatrix::from_columns(1, rel_ctx.nvars(), &[vec![g.differentiate(0)]]).map_err(|e| e.to_string())?;
    let h = vec![g.differentiate(t)];
    let c = cramer_field(&rel_ctx, &mk, &h).map_err(|e| e.to_string())?;
    ensure(c[0].denominator.is_one() && c[0].numerator == rel_ctx.parse("-z2^2").unwrap(), || format!("c = {}", c[0].render(&rel_ctx)))?;
    ensure(verify_cramer(&rel_ctx, &mk, &h, &c).unwrap_or(false), || "Cramer identity does not verify".into())?;

    let report = chain_rule_check(&param, &imp).map_err(|e| e.to_string())?;
    ensure(report.truncation == 50, || format!("chain rule checked to {}", report.truncation))?;
    ensure(report.vanishes && report.ok, || format!("chain rule: {report:?}"))?;
    ensure(report.cramer == vec!["-z2^2".to_string()], || format!("cramer {:?}", report.cramer))?;
    let vel = &report.velocity[0];
    ensure(vel.holds && vel.lhs == vel.rhs && vel.lhs.starts_with("-s^4 + O("), || format!("c∘F: {} vs {}", vel.lhs, vel.rhs))?;

    let param = CurveFamilyParam::from_polys(vec![ts("s^3"), ts("s^2*(1 + s)")], 50).map_err(|e| e.to_string())?;
    let nf = normal_form(&param).map_err(|e| e.to_string())?;
    let fam = &nf.family;
    let last = &fam.coords()[1];
    ensure(*last == BiSeries::s(last.order()).pow(2), || format!("last coordinate {:?}", fam.render()[1]))?;
    ensure(fam.coords()[0].s_order() == Some(3), || format!("ord_s F~_1 = {:?}", fam.coords()[0].s_order()))?;
    ensure(fam.is_normal_form(), || "result is not in normal form".into())?;
    ensure(nf.verify(&param).unwrap_or(false), || "normal form does not recompose to the input".into())
}

fn corpus() -> Vec<PathBuf> {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("corpus");
    let mut dirs: Vec<PathBuf> = std::fs::read_dir(root).unwrap().map(|e| e.unwrap().path()).filter(|p| p.is_dir()).collect();
    dirs.sort();
    dirs
}

fn criterion_11() -> Outcome {
    let dirs = corpus();
    ensure(!dirs.is_empty(), || "empty corpus".into())?;
    let mut checked = 0;
    for dir in &dirs {
        let name = dir.file_name().unwrap().to_string_lossy().to_string();
        let frozen = std::fs::read_to_string(dir.join("report.json")).map_err(|e| format!("{name}: {e}"))?;
        let report = lipdouble_cli::read_report(&dir.join("report.json")).map_err(|e| format!("{name}: {e}"))?;
        for c in report.outcome.verify() {
            checked += 1;
            ensure(c.ok, || format!("{name}: certificate `{}` does not verify", c.what))?;
        }
        let task = lipdouble_cli::read_task(&dir.join("task.json")).map_err(|e| format!("{name}: {e}"))?;
        for _ in 0..2 {
            let again = lipdouble_cli::run(&task).map_err(|e| format!("{name}: {e}"))?;
            ensure(lipdouble_cli::report_json(&again) == frozen, || format!("{name}: rerun differs from the frozen report"))?;
        }
        let out = std::process::Command::new(env!("CARGO_BIN_EXE_lipdouble"))
            .arg("verify-certificate")
            .arg(dir.join("report.json"))
            .output()
            .map_err(|e| e.to_string())?;
        ensure(out.status.success(), || format!("{name}: verify-certificate exited with {}", out.status))?;
    }
    ensure(checked > 0, || "no certificates in the corpus".into())
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 11] = [
        ("generator-basis equivalence", criterion_1),
        ("rank doubling", criterion_2),
        ("cosupport identity and union formula", criterion_3),
        ("off-diagonal additivity and pointwise consistency", criterion_4),
        ("closure-engine concordance", criterion_5),
        ("minors-reduction regression", criterion_6),
        ("condition-checker logic", criterion_7),
        ("weighted-homogeneous fast path", criterion_8),
        ("hyperplane-section identities", criterion_9),
        ("curve family round trip", criterion_10),
        ("certificate round trip", criterion_11),
    ];
    let mut failed = Vec::new();
    for (i, (name, f)) in criteria.iter().enumerate() {
        let start = std::time::Instant::now();
        match f() {
            Ok(()) => println!("criterion {:>2} PASS  {name} ({:.1?})", i + 1, start.elapsed()),
            Err(e) => {
                println!("criterion {:>2} FAIL  {name}: {e}", i + 1);
                failed.push(i + 1);
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed.len(), criteria.len());
    if !failed.is_empty() {
        eprintln!("failed criteria: {failed:?}");
        std::process::exit(1);
    }
}
