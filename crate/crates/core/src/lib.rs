pub mod error;
pub mod ring;

pub use error::{Argument, Error, Result};
pub use ring::{BaseField, Ring, RingElement, RingKind, RingMap, Scalar};
pub mod series;
pub use series::LaurentSeries;
pub mod symbol;
pub use symbol::{
    contou_carrere, kato_residue, required_precision, witt_decompose, witt_decompose_to, KatoValue, MHatElement,
    RequiredPrecision, UnitDecomposition,
};
pub mod forms;
pub use forms::{
    d_series, dlog, dlog2, dlog_a, dlog_square, form_substitute, kato_square, res1, res2, res2_dlog2,
    two_form_substitute, wedge, AOneForm, KatoDifferential, OneForm, TwoForm,
};
pub mod projective;
pub mod random;
pub use projective::{
    anderson_romo_check, anderson_romo_check_on, contou_carrere_at, realize_residues, residue_sum_check, tame_symbol_at_point, weil_check,
    GlobalTwoForm, ReciprocityReport, SectionPoint, SplitRationalFunction,
};
