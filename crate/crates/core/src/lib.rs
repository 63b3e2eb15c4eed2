//! Exact computations in the graded Hecke category: bigraded complexes,
//! Soergel bimodules, Rouquier complexes and triply graded link homology.

pub mod bigraded;
pub mod cli;
pub mod complexes;
pub mod coxeter;
pub mod hecke;
pub mod homology;
pub mod laurent;
pub mod linalg;
pub mod mixed_point;
pub mod modular;
pub mod poly;
pub mod sampling;
pub mod scalar;
pub mod soergel;

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/bigraded.md")]
    struct Bigraded;
    #[doc = include_str!("../../../book/src/mixed.md")]
    struct Mixed;
    #[doc = include_str!("../../../book/src/hecke.md")]
    struct Hecke;
    #[doc = include_str!("../../../book/src/soergel.md")]
    struct Soergel;
    #[doc = include_str!("../../../book/src/complexes.md")]
    struct Complexes;
    #[doc = include_str!("../../../book/src/homology.md")]
    struct Homology;
    #[doc = include_str!("../../../book/src/cli.md")]
    struct Cli;
}
