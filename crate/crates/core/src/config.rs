//! Prism geometry and the scalar constants derived from it.
//!
//! The cross-section is the triangle with sloshing side `[0, L] x {0}`,
//! wall angle `alpha = pi/(2q)` at the origin and `beta = pi/(2r)` at
//! `(L, 0)`; the fluid lies in `y < 0`.

use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Which end of the sloshing side a corner quantity belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Corner {
    Alpha,
    Beta,
}

impl Corner {
    pub fn as_str(self) -> &'static str {
        match self {
            Corner::Alpha => "alpha",
            Corner::Beta => "beta",
        }
    }
}

/// Validated prism geometry. Angles are always recomputed from `q`, `r`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PrismConfig {
    length: f64,
    depth: f64,
    q: u32,
    r: u32,
}

/// Scalar constants shared by the counting formulas.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DerivedConstants {
    pub kappa: f64,
    pub nu: u32,
    /// `pi / M`, the spacing of the transverse wavenumbers.
    pub lambda_step: f64,
}

impl DerivedConstants {
    pub fn lambda(&self, n: usize) -> f64 {
        n as f64 * self.lambda_step
    }
}

pub fn validate_config(length: f64, depth: f64, q: i64, r: i64) -> Result<PrismConfig> {
    PrismConfig::new(length, depth, q, r)
}

/// `lambda_n = n pi / M`.
pub fn mode_wavenumber(cfg: &PrismConfig, n: i64) -> Result<f64> {
    if n < 0 {
        return Err(Error::NegativeIndex(n));
    }
    Ok(cfg.lambda(n as usize))
}

impl PrismConfig {
    pub fn new(length: f64, depth: f64, q: i64, r: i64) -> Result<Self> {
        if !(length > 0.0 && length.is_finite() && depth > 0.0 && depth.is_finite()) {
            return Err(Error::NonPositiveLength { length, depth });
        }
        if q < 1 || r < 1 || q > i64::from(u32::MAX) || r > i64::from(u32::MAX) {
            return Err(Error::InvalidAngleInteger { q, r });
        }
        if q == 1 && r == 1 {
            return Err(Error::DegenerateBothHalfPi);
        }
        Ok(Self {
            length,
            depth,
            q: q as u32,
            r: r as u32,
        })
    }

    pub fn length(&self) -> f64 {
        self.length
    }

    pub fn depth(&self) -> f64 {
        self.depth
    }

    pub fn q(&self) -> u32 {
        self.q
    }

    pub fn r(&self) -> u32 {
        self.r
    }

    pub fn alpha(&self) -> f64 {
        PI / (2.0 * f64::from(self.q))
    }

    pub fn beta(&self) -> f64 {
        PI / (2.0 * f64::from(self.r))
    }

    pub fn angle_integer(&self, corner: Corner) -> u32 {
        match corner {
            Corner::Alpha => self.q,
            Corner::Beta => self.r,
        }
    }

    pub fn angle(&self, corner: Corner) -> f64 {
        PI / (2.0 * f64::from(self.angle_integer(corner)))
    }

    /// 0 when `q` and `r` have the same parity, 1/2 otherwise.
    pub fn kappa(&self) -> f64 {
        if (self.q + self.r) % 2 == 0 {
            0.0
        } else {
            0.5
        }
    }

    /// `q r mod 2`.
    pub fn nu(&self) -> u32 {
        (self.q % 2) * (self.r % 2)
    }

    pub fn lambda(&self, n: usize) -> f64 {
        n as f64 * PI / self.depth
    }

    pub fn derived(&self) -> DerivedConstants {
        DerivedConstants {
            kappa: self.kappa(),
            nu: self.nu(),
            lambda_step: PI / self.depth,
        }
    }

    /// Intersection of the two wall lines.
    pub fn apex(&self) -> (f64, f64) {
        let (sa, ca) = self.alpha().sin_cos();
        let sb = self.beta().sin();
        let det = (self.alpha() + self.beta()).sin();
        (
            self.length * ca * sb / det,
            -self.length * sa * sb / det,
        )
    }

    /// True when `(x, y)` is in the closed triangle, with a relative slack.
    pub fn contains(&self, x: f64, y: f64, slack: f64) -> bool {
        let tol = slack * self.length.max(1.0);
        if y > tol {
            return false;
        }
        let (sa, ca) = self.alpha().sin_cos();
        let (sb, cb) = self.beta().sin_cos();
        // signed distances to the wall lines, positive inside
        let da = x * sa + y * ca;
        let db = (self.length - x) * sb + y * cb;
        da >= -tol && db >= -tol
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn reference_configuration_constants() {
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        assert!((cfg.alpha() - PI / 4.0).abs() < 1e-15);
        assert!((cfg.beta() - PI / 6.0).abs() < 1e-15);
        assert_eq!(cfg.kappa(), 0.5);
        assert_eq!(cfg.nu(), 0);
        let c = validate_config(PI, PI, 5, 5).unwrap();
        assert_eq!((c.kappa(), c.nu()), (0.0, 1));
    }

    #[test]
    fn rejects_bad_input() {
        assert_eq!(
            validate_config(1.0, 2.0, 1, 1),
            Err(Error::DegenerateBothHalfPi)
        );
        assert!(matches!(
            validate_config(0.0, 1.0, 2, 2),
            Err(Error::NonPositiveLength { .. })
        ));
        assert!(matches!(
            validate_config(1.0, f64::NAN, 2, 2),
            Err(Error::NonPositiveLength { .. })
        ));
        assert!(matches!(
            validate_config(1.0, 1.0, 0, 2),
            Err(Error::InvalidAngleInteger { .. })
        ));
    }

    #[test]
    fn wavenumbers() {
        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        assert_eq!(mode_wavenumber(&cfg, 0).unwrap(), 0.0);
        assert!((mode_wavenumber(&cfg, 3).unwrap() - 3.0).abs() < 1e-15);
        assert_eq!(mode_wavenumber(&cfg, -1), Err(Error::NegativeIndex(-1)));
        let cfg = validate_config(1.0, 2.0, 2, 3).unwrap();
        assert!((mode_wavenumber(&cfg, 1).unwrap() - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn apex_of_right_isosceles() {
        let cfg = validate_config(PI, PI, 2, 2).unwrap();
        let (x, y) = cfg.apex();
        assert!((x - PI / 2.0).abs() < 1e-14 && (y + PI / 2.0).abs() < 1e-14);
        let cfg = validate_config(PI, PI, 2, 3).unwrap();
        let (x, y) = cfg.apex();
        assert!((y + x).abs() < 1e-14);
        assert!((y + (PI - x) * (PI / 6.0).tan()).abs() < 1e-14);
    }

    #[test]
    fn vertical_wall_apex() {
        let cfg = validate_config(2.0, 1.0, 1, 2).unwrap();
        let (x, y) = cfg.apex();
        assert!(x.abs() < 1e-15 && (y + 2.0).abs() < 1e-14);
        assert!(cfg.contains(0.0, -1.0, 1e-12));
        assert!(!cfg.contains(-0.1, -1.0, 1e-12));
    }
}
