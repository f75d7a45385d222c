//! Exact and special-function solutions: the Whittaker E = 0 eigenfunction
//! of the irregular sextic, the Bessel-pair ansatz as a finite exact
//! eigen-system, and the ₀F₂ solutions of the adjoint third-order problem.

mod bessel;
mod hypergeom;
mod whittaker;

pub use bessel::{
    ansatz_matrix, ansatz_truncation, bessel_ansatz_solve, hermite_pivots, BesselAnsatzSolution,
    BesselEigenpair, BesselModuleElement,
};
pub use hypergeom::{
    c0_solution, subdominant_k, subdominant_parts, subdominant_third_order, HypergeomSeries,
    SubdominantValue,
};
pub use whittaker::{qj0_constant, whittaker_solution};
