/// Numeric working mode.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    /// Plain binary64 with Newton polishing.
    Standard,
    /// Double-double refinement (~31 significant decimal digits) on the
    /// polishing and certification paths. Changes accuracy only, never the
    /// public contract.
    Extended,
}

/// Tolerances shared by the whole pipeline. All residuals they gate are
/// relative: scaled by the norms of the inputs involved.
#[derive(Debug, Clone, Copy)]
pub struct Precision {
    pub mode: Mode,
    /// On-variety incidence residual.
    pub tol_geo: f64,
    /// Projective deduplication distance.
    pub tol_dup: f64,
    /// Perfect-square certificate residual.
    pub tol_sq: f64,
}

impl Default for Precision {
    fn default() -> Self {
        Precision {
            mode: Mode::Standard,
            tol_geo: 1e-8,
            tol_dup: 1e-6,
            tol_sq: 1e-8,
        }
    }
}

impl Precision {
    pub fn extended() -> Self {
        Precision {
            mode: Mode::Extended,
            ..Precision::default()
        }
    }

    pub fn validate(&self) -> crate::Result<()> {
        if self.tol_geo <= 0.0 || self.tol_dup <= 0.0 || self.tol_sq <= 0.0 {
            return Err(crate::Error::InvalidInput(
                "tolerances must be strictly positive".into(),
            ));
        }
        Ok(())
    }
}
