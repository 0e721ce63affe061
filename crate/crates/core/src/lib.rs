//! A computational categorical-algebra engine: the kernel/cokernel calculus
//! of z-exact categories, exact sequences, snake and 3x3 constructions, two
//! homology functors, and a brute-force axiom prober, instantiated by four
//! finite concrete categories (pointed sets, commutative monoids, groups,
//! finitely generated abelian groups).

pub mod error;
pub mod homology;
pub mod io;
pub mod matrix;
pub mod zexact;

pub mod cmon;
pub mod diexact;
pub mod fgab;
pub mod fingrp;
pub mod probe;
pub mod sample;
pub mod setpt;
pub mod structure;

pub use error::{Error, Result};
pub use zexact::{FactorKind, Factorization, Subobject, ZExact};
