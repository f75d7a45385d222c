//! Quasi-exactly-solvable sectors of the sextic oscillator, the isospectral
//! third-order problem and its n-th order generalisation.
//!
//! The crate is organised in layers:
//!
//! * [`params`] — exact problem descriptors and the maps between them;
//! * [`bdpoly`] — exact energy-polynomial recursions and real-root isolation;
//! * [`frobenius`] — local series at the origin, resonances and logarithms;
//! * [`shoot`] — an independent numerical oracle (series-seeded shooting);
//! * [`closedform`] — special-function and Bessel-module exact solutions.

pub mod bdpoly;
pub mod closedform;
pub mod error;
pub mod frobenius;
pub mod mp;
pub mod ode;
pub mod par;
pub mod params;
pub mod quad;
pub mod rational;
pub mod ring;
pub mod shoot;
pub mod special;

pub use error::{QesError, Result};
pub use rational::Q;
