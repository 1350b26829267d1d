//! Convolution algebras, twisting cochains, and the bar and cobar constructions.

mod construct;
mod convolution;
mod morphism;

pub use construct::{bar, cobar, weight_piece, BarConstruction, CobarConstruction};
pub use convolution::{
    convolution_differential, convolution_product, is_twisting_cochain, projection_inclusion, render,
    ConvolutionElement, DefectReport, Residual, TwistingCochain,
};
pub use morphism::{bar_map, enveloping_twisting, tau_to_algebra_morphism, tau_to_coalgebra_morphism};
