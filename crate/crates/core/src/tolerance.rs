/// Numerical thresholds shared by every module.
///
/// Residuals are compared against these after scaling by the natural size of
/// the inputs (`max(1, |J|^2)`, `|R|`, ...), so the defaults hold for O(1)
/// fixtures and for conjugated structures with moderately large entries.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Exact algebraic identities (`J^2 = -Id`, compatibility, symmetries).
    pub identity: f64,
    /// Preservation of the base form by sampled group elements.
    pub group: f64,
    /// Singular value cut-off, relative to the largest one, for ranks and
    /// non-degeneracy.
    pub rank: f64,
    /// Relative size below which a curvature component counts as vanishing.
    /// Chosen above the finite-difference noise floor.
    pub structural_zero: f64,
    /// Pivot floor for pseudo-orthonormal and Darboux frames.
    pub pivot: f64,
    /// Largest constraint residual accepted from finite differences before the
    /// curvature projection snaps the tensor.
    pub fd_presnap: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { identity: 1e-10, group: 1e-9, rank: 1e-8, structural_zero: 1e-6, pivot: 1e-8, fd_presnap: 1e-5 }
    }
}
