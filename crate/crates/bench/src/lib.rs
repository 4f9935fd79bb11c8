pub use lipdouble;
