pub mod dynamics;
pub mod exact_arith;
pub mod harness;
pub mod inequalities;
pub mod intersection;
pub mod okounkov;
pub mod polytope;
pub mod surface;
