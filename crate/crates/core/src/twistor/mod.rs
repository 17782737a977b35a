//! The twistor fibre at a point `j`: canonical 2-form, `j`-action, Nijenhuis
//! tensors of `J+` and `J-`, the anti-invariant Weyl pieces and the verdicts
//! that tie the closed-form criteria to fibre sampling.

mod action;
mod forms;
mod nijenhuis;
mod verdict;
mod weyl;

pub use action::{four_i_component, j_action, j_action_operator, j_action_spectrum, spectrum_distance, SPECTRUM};
pub use forms::{
    build_two_form, omega1, omega2, two_form_nondegenerate, two_form_positivity, type11_check, NonDegeneracy,
    TwoFormAtJ,
};
pub use nijenhuis::{
    nijenhuis, nijenhuis_span, rho_from_ricci, ricci_type_vertical_image, vertical_nijenhuis, Sign, SpanReport,
};
pub use verdict::{integrability_verdict, two_form_verdict, type11_verdict, Question, SamplingConfig, Verdict};
pub use weyl::{anti_invariant_residual, projector_pj, psi_j, r_of_s, random_anti_invariant, s_from_r};

use crate::curvature::CurvatureTensor;
use crate::spaces::{BilinearStructure, ComplexStructure};
use crate::{Error, Result};

pub(crate) fn check_same_space(r: &CurvatureTensor, j: &ComplexStructure) -> Result<()> {
    check_base(r.base(), j)
}

pub(crate) fn check_base(a: &BilinearStructure, j: &ComplexStructure) -> Result<()> {
    let b = j.base();
    if a.kind() != b.kind() || a.g() != b.g() {
        return Err(Error::BaseMismatch);
    }
    Ok(())
}
