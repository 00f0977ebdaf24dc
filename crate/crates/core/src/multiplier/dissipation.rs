use super::gfunc::GFunction;
use crate::error::{Error, Result};
use crate::spectral::{Grid, VectorField};

/// Coefficient (ν or η), exponent (α or β) and weakening factor `g` of one
/// dissipation operator. The symbol is `m(ξ) = |ξ|^exponent / g(|ξ|)` and
/// the dynamics use `coefficient · m²`.
#[derive(Clone, Debug, PartialEq)]
pub struct DissipationSpec {
    coefficient: f64,
    exponent: f64,
    g: GFunction,
}

impl DissipationSpec {
    pub fn new(coefficient: f64, exponent: f64, g: GFunction) -> Result<Self> {
        if !(coefficient >= 0.0 && coefficient.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dissipation coefficient {coefficient} must be finite and >= 0"
            )));
        }
        if !(exponent > 0.0 && exponent.is_finite()) {
            return Err(Error::InvalidParameter(format!(
                "dissipation exponent {exponent} must be > 0"
            )));
        }
        g.validate()?;
        Ok(DissipationSpec {
            coefficient,
            exponent,
            g,
        })
    }

    /// No dissipation at all (`coefficient = 0`).
    pub fn none(exponent: f64) -> Self {
        DissipationSpec {
            coefficient: 0.0,
            exponent,
            g: GFunction::ConstantOne,
        }
    }

    pub fn coefficient(&self) -> f64 {
        self.coefficient
    }

    pub fn exponent(&self) -> f64 {
        self.exponent
    }

    pub fn g(&self) -> &GFunction {
        &self.g
    }

    pub fn with_coefficient(&self, coefficient: f64) -> Result<Self> {
        Self::new(coefficient, self.exponent, self.g.clone())
    }

    /// `radius^exponent / g(radius)`, with `0` at the origin.
    pub fn symbol(&self, radius: f64) -> Result<f64> {
        if !(radius >= 0.0) {
            return Err(Error::InvalidParameter(format!("negative radius {radius}")));
        }
        Ok(self.symbol_unchecked(radius))
    }

    #[inline]
    pub(crate) fn symbol_unchecked(&self, radius: f64) -> f64 {
        if radius == 0.0 {
            0.0
        } else {
            radius.powf(self.exponent) / self.g.eval(radius)
        }
    }

    /// Symbol of every mode of `grid`, by flat index.
    pub fn symbol_table(&self, grid: &Grid) -> Vec<f64> {
        (0..grid.len())
            .map(|i| self.symbol_unchecked(grid.wavenumber_magnitude(i)))
            .collect()
    }

    /// `coefficient · m(|k|)²` applied to every coefficient.
    pub fn apply_dissipation(&self, v: &VectorField) -> VectorField {
        let table = self.symbol_table(v.grid());
        let nu = self.coefficient;
        v.map(|c| c.apply_symbol(|i| nu * table[i] * table[i]))
    }

    /// The unsquared operator `m(|k|)`, without the coefficient.
    pub fn apply_l(&self, v: &VectorField) -> VectorField {
        let table = self.symbol_table(v.grid());
        v.map(|c| c.apply_symbol(|i| table[i]))
    }

    /// `‖𝓛 v‖²_{L²}`.
    pub fn l_norm_sq(&self, v: &VectorField) -> f64 {
        self.apply_l(v).l2_norm().powi(2)
    }
}
