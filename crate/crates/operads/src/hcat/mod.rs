//! Presented categories of decorated labelled planar trees.
//!
//! Objects are planar rooted trees whose leaves carry a bijective
//! labelling and whose vertices carry tree decorations matching their
//! valencies; the undecorated variant drops the decorations.  Arrows are
//! generated by cluster contractions along tree morphisms and by unit
//! insertions.  On top of the generated graph sit the component counter
//! [`pi0`], the symmetrisation colimit [`symmetrise`], the bar-degree
//! comparison [`nerve_compare`], the decoration-forgetting map [`zeta`]
//! with its [`finality_probe`], and DOT/CSV exports.

pub mod arrows;
pub mod colim;
pub mod export;
pub mod nerve;
pub mod objects;
pub mod pi0;
pub mod zeta;

pub use arrows::{
    contract, contract_hinf, generating_arrows, generating_arrows_hinf, insert_unit,
    ArrowWitness, GenArrow, HInfArrow, HInfWitness,
};
pub use colim::{symmetrise, DecoratedObject, SymClass, SymReport};
pub use export::{csv_nerve, csv_pi0, dot_category};
pub use nerve::{
    enumerate_expr_objects, freeop_count_check, nerve_compare, HnExprObject, NerveBounds,
};
pub use objects::{enumerate_hinf, enumerate_hn, zeta, HInfObject, HnObject, Plan};
pub use pi0::{pi0, Pi0Report};
pub use zeta::{finality_probe, FinalityReport};
