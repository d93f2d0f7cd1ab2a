//! Exact-arithmetic kernel for curved shifted A-infinity algebras over Q or
//! F_p: tensor coalgebra calculus, Stasheff validation, twisting by
//! degree-zero elements, Maurer-Cartan theory with constructive Kan horn
//! filling, and convolution/deformation complexes for dg algebra morphisms.
//!
//! The conventions in force throughout:
//!
//! - Cohomological grading; every structure operation `Q_n` has degree +1
//!   (the "shifted" convention, so no binomial signs appear in the Stasheff
//!   relations beyond the Koszul rule).
//! - Filtration weights attach to basis vectors, weight >= 1; `F^k` is the
//!   span of basis vectors of weight >= k. Operations never drop weights.
//! - All arithmetic is exact: arbitrary-precision rationals or canonical
//!   residues mod a prime. No floating point anywhere.

pub mod algebra;
pub mod cochains;
pub mod convolution;
pub mod dga;
pub mod error;
pub mod extension;
pub mod field;
pub mod graded;
pub mod linalg;
pub mod mc;
pub mod samples;
pub mod tensor;
pub mod twist;

pub use algebra::{compose_morphisms, AInftyStructure, InftyMorphism, MorphismReport, StasheffReport};
pub use cochains::{index_sets, Cochain, ContractionSign};
pub use convolution::{
    bar_coalgebra, build_convolution, deformation_complex, interval_tensor, CoalgebraBuilder,
    ConilpotentCoalgebra, ConvolutionAlgebra, IntervalCoalgebra,
};
pub use dga::{DgAlgebra, DgAlgebraBuilder, DgCombo};
pub use error::{Error, Result};
pub use extension::{extend_morphism, ExtendedAlgebra};
pub use mc::{mc_map, Horn, McContext, McSimplex};
pub use field::{FieldSpec, Scalar};
pub use graded::{koszul_sign, BasisVector, Element, GradedSpace, Weight};
pub use tensor::{TensorElement, TensorWord, TruncationPolicy};
pub use twist::{bianchi_residual, element_curvature, is_mc, twist, twist_morphism, twist_oracle, TwistResult};
