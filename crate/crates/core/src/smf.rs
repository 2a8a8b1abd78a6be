//! Forbes-Deane special mathematical functions v, u, t, s, r of the Gauss
//! variable x.
//!
//! Two families are available through [`SmfVariant`]:
//!
//! - `HighPrecision`: the fitted (1−x)·polynomial + x·ln x·polynomial forms,
//!   accurate to better than 1e-9 over 0 ≤ x ≤ 1;
//! - `SimpleGood`: v ≈ 1 − x + (x ln x)/6 and the closed forms that follow
//!   from it by differentiation (absolute error in v below 0.0024).
//!
//! Both are fitted on [0, 1] only, so arguments outside that range are
//! rejected rather than extrapolated.
//!
//! ```text
//! u = −dv/dx        t = v + (4/3)·x·u
//! s = v + x·u       r(η, x) = exp(η·u)
//! ```

use std::f64::consts::{LN_2, PI, SQRT_2};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
pub enum SmfVariant {
    /// The 2006 "simple good approximation".
    SimpleGood,
    #[default]
    HighPrecision,
}

impl SmfVariant {
    pub fn label(self) -> &'static str {
        match self {
            SmfVariant::SimpleGood => "fd06",
            SmfVariant::HighPrecision => "hp",
        }
    }
}

impl std::str::FromStr for SmfVariant {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "hp" | "high-precision" | "highprecision" => Ok(SmfVariant::HighPrecision),
            "fd06" | "simple" | "simple-good" | "simplegood" => Ok(SmfVariant::SimpleGood),
            other => Err(Error::InvalidInput(format!(
                "unknown SMF variant {other:?} (expected hp or fd06)"
            ))),
        }
    }
}

/// Fitted coefficients of the high-precision v and u formulae.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpCoefficients {
    /// p₁..p₄ of the (1−x) polynomial in v.
    pub p: [f64; 4],
    /// q₁..q₄ of the x·ln x polynomial in v.
    pub q: [f64; 4],
    /// s₀..s₅ of the (1−x) polynomial in u.
    pub s: [f64; 6],
    /// t₀..t₄ of the ln x polynomial in u.
    pub t: [f64; 5],
    /// u(1) = 3π/(8√2).
    pub u_at_one: f64,
}

pub const HP: HpCoefficients = HpCoefficients {
    p: [
        0.032_705_304_46,
        0.009_157_798_739,
        0.002_644_272_807,
        0.000_089_871_738_11,
    ],
    q: [
        0.187_499_344_1,
        0.017_506_369_47,
        0.005_527_069_444,
        0.001_023_904_180,
    ],
    s: [
        0.053_249_972_7,
        0.024_222_259_59,
        0.015_122_059_58,
        0.007_550_739_834,
        0.000_639_172_865_9,
        -0.000_048_819_745_89,
    ],
    t: [
        0.1875,
        0.035_155_558_74,
        0.019_127_526_80,
        0.011_522_840_09,
        0.003_624_569_427,
    ],
    u_at_one: 3.0 * PI / (8.0 * SQRT_2),
};

fn check_closed(function: &'static str, x: f64) -> Result<()> {
    if (0.0..=1.0).contains(&x) {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            x,
            domain: "[0, 1]",
        })
    }
}

fn check_open_left(function: &'static str, x: f64) -> Result<()> {
    if x > 0.0 && x <= 1.0 {
        Ok(())
    } else {
        Err(Error::Domain {
            function,
            x,
            domain: "(0, 1]",
        })
    }
}

/// x·ln x with its limit 0 at x = 0.
fn x_ln_x(x: f64) -> f64 {
    if x == 0.0 {
        0.0
    } else {
        x * x.ln()
    }
}

/// Horner evaluation, coefficients in ascending order.
fn poly(coeffs: &[f64], x: f64) -> f64 {
    coeffs.iter().rev().fold(0.0, |acc, &c| acc * x + c)
}

pub(crate) fn v_unchecked(x: f64, variant: SmfVariant) -> f64 {
    match variant {
        SmfVariant::SimpleGood => 1.0 - x + x_ln_x(x) / 6.0,
        SmfVariant::HighPrecision => {
            (1.0 - x) * (1.0 + x * poly(&HP.p, x)) + x_ln_x(x) * poly(&HP.q, x)
        }
    }
}

pub(crate) fn u_unchecked(x: f64, variant: SmfVariant) -> f64 {
    match variant {
        SmfVariant::SimpleGood => 5.0 / 6.0 - x.ln() / 6.0,
        SmfVariant::HighPrecision => {
            HP.u_at_one - (1.0 - x) * poly(&HP.s, x) - x.ln() * poly(&HP.t, x)
        }
    }
}

pub(crate) fn t_unchecked(x: f64, variant: SmfVariant) -> f64 {
    v_unchecked(x, variant) + 4.0 / 3.0 * x * u_unchecked(x, variant)
}

pub(crate) fn s_unchecked(x: f64, variant: SmfVariant) -> f64 {
    match variant {
        SmfVariant::SimpleGood => 1.0 - x / 6.0,
        SmfVariant::HighPrecision => {
            if x == 0.0 {
                1.0
            } else {
                v_unchecked(x, variant) + x * u_unchecked(x, variant)
            }
        }
    }
}

/// Principal function v(x), 0 ≤ x ≤ 1.
pub fn v_fd(x: f64, variant: SmfVariant) -> Result<f64> {
    check_closed("v_fd", x)?;
    Ok(v_unchecked(x, variant))
}

/// u(x) = −dv/dx, 0 < x ≤ 1 (logarithmic singularity at 0).
pub fn u_fd(x: f64, variant: SmfVariant) -> Result<f64> {
    check_open_left("u_fd", x)?;
    Ok(u_unchecked(x, variant))
}

/// Pre-exponential correction t(x) = v + (4/3)·x·u, 0 < x ≤ 1.
pub fn t_fd(x: f64, variant: SmfVariant) -> Result<f64> {
    check_open_left("t_fd", x)?;
    Ok(t_unchecked(x, variant))
}

/// Slope correction s(x) = v + x·u, 0 ≤ x ≤ 1. At x = 0 both variants give 1
/// (x·u → 0).
pub fn s_fd(x: f64, variant: SmfVariant) -> Result<f64> {
    check_closed("s_fd", x)?;
    Ok(s_unchecked(x, variant))
}

/// Intercept correction r(η, x) = exp(η·u(x)), η ≥ 0, 0 < x ≤ 1.
pub fn r_fd(eta: f64, x: f64, variant: SmfVariant) -> Result<f64> {
    if !(eta >= 0.0) {
        return Err(Error::Domain {
            function: "r_fd",
            x: eta,
            domain: "eta >= 0",
        });
    }
    Ok((eta * u_fd(x, variant)?).exp())
}

/// The first terms of the exact two-series expansion of v, valid near x = 0.
/// Truncation error is about 1e-6 at x = 0.1 and grows quickly beyond.
pub fn series_v_loworder(x: f64) -> Result<f64> {
    if !(0.0..=0.2).contains(&x) {
        return Err(Error::Domain {
            function: "series_v_loworder",
            x,
            domain: "[0, 0.2]",
        });
    }
    let c1 = 9.0 / 8.0 * LN_2 + 3.0 / 16.0;
    let c2 = 27.0 / 256.0 * LN_2 - 51.0 / 1024.0;
    let c3 = 315.0 / 8192.0 * LN_2 - 177.0 / 8192.0;
    let power_part = 1.0 - c1 * x - c2 * x * x - c3 * x * x * x;
    let log_part = x_ln_x(x) * (3.0 / 16.0 + 9.0 / 512.0 * x + 105.0 / 16384.0 * x * x);
    Ok(power_part + log_part)
}

/// Nordheim parameter y = √f, kept for interoperability with older tables.
pub fn nordheim_y_from_f(f: f64) -> Result<f64> {
    if !(f >= 0.0) {
        return Err(Error::Domain {
            function: "nordheim_y_from_f",
            x: f,
            domain: "f >= 0",
        });
    }
    Ok(f.sqrt())
}

#[cfg(test)]
mod tests {
    use super::SmfVariant::{HighPrecision as Hp, SimpleGood as Sg};
    use super::*;

    #[test]
    fn endpoints() {
        for var in [Sg, Hp] {
            assert!((v_fd(0.0, var).unwrap() - 1.0).abs() < 1e-9);
            assert!(v_fd(1.0, var).unwrap().abs() < 1e-9);
            assert_eq!(s_fd(0.0, var).unwrap(), 1.0);
        }
        assert!((u_fd(1.0, Hp).unwrap() - 0.833_040_550_9).abs() < 1e-9);
        assert_eq!(u_fd(1.0, Sg).unwrap(), 5.0 / 6.0);
        assert!((t_fd(1.0, Sg).unwrap() - 10.0 / 9.0).abs() < 1e-15);
        assert!((t_fd(1e-12, Sg).unwrap() - 1.0).abs() < 1e-9);
    }

    #[test]
    fn table_coefficients_as_printed() {
        assert_eq!(HP.p[0], 0.03270530446);
        assert_eq!(HP.q[0], 0.1874993441);
        assert_eq!(HP.t[0], 0.1875);
        assert_eq!(HP.s[5], -0.00004881974589);
        assert!((HP.u_at_one - 0.8330405509).abs() < 1e-10);
    }

    #[test]
    fn hfc_fitting_point_values() {
        // Values frozen from an independent evaluation in double precision.
        let f = 0.629;
        assert!((u_fd(f, Hp).unwrap() - 0.906_962_8).abs() < 1e-6);
        assert!((v_fd(f, Hp).unwrap() - 0.321_624_0).abs() < 1e-6);
        assert!((s_fd(f, Hp).unwrap() - 0.892).abs() < 1e-3);
        assert!((s_fd(f, Sg).unwrap() - (1.0 - 0.629 / 6.0)).abs() < 1e-15);
        let t_sg = 1.0 + 0.629 / 9.0 - 0.629 / 18.0 * 0.629f64.ln();
        assert!((t_fd(f, Sg).unwrap() - t_sg).abs() < 1e-14);
        assert!((t_sg - 1.0861).abs() < 1e-4);

        let r_hp = r_fd(6.221, f, Hp).unwrap();
        assert!((r_hp - 282.0).abs() <= 2.0, "{r_hp}");
        let r_sg = r_fd(6.221, f, Sg).unwrap();
        let u_sg = 5.0 / 6.0 - 0.629f64.ln() / 6.0;
        assert!((r_sg / (6.221 * u_sg).exp() - 1.0).abs() < 1e-12, "{r_sg}");
        assert!((r_sg - 288.8).abs() < 0.5);
        assert_eq!(r_fd(0.0, f, Hp).unwrap(), 1.0);
    }

    #[test]
    fn series_oracle_near_zero() {
        assert_eq!(series_v_loworder(0.0).unwrap(), 1.0);
        // Frozen from an independent term-by-term evaluation.
        assert!((series_v_loworder(0.05).unwrap() - 0.923_357_550_280_427_5).abs() < 1e-13);
        for i in 0..=100 {
            let x = i as f64 * 1e-3;
            let d = (series_v_loworder(x).unwrap() - v_fd(x, Hp).unwrap()).abs();
            assert!(d <= 1e-4, "x = {x}: {d}");
        }
        assert!(series_v_loworder(0.3).is_err());
    }

    #[test]
    fn simple_good_error_bound() {
        let worst = (0..=10_000)
            .map(|i| i as f64 / 10_000.0)
            .map(|x| (v_fd(x, Sg).unwrap() - v_fd(x, Hp).unwrap()).abs())
            .fold(0.0, f64::max);
        assert!(worst <= 0.0024, "{worst}");
        assert!(worst > 0.002);
    }

    #[test]
    fn domain_errors() {
        assert!(matches!(v_fd(-0.1, Hp), Err(Error::Domain { .. })));
        assert!(v_fd(1.0 + 1e-12, Hp).is_err());
        assert!(u_fd(0.0, Hp).is_err());
        assert!(t_fd(0.0, Sg).is_err());
        assert!(s_fd(1.5, Sg).is_err());
        assert!(r_fd(-1.0, 0.5, Hp).is_err());
        assert!(r_fd(1.0, 0.0, Hp).is_err());
        assert!(v_fd(f64::NAN, Hp).is_err());
    }

    #[test]
    fn nordheim_parameter() {
        assert_eq!(nordheim_y_from_f(0.0).unwrap(), 0.0);
        assert_eq!(nordheim_y_from_f(1.0).unwrap(), 1.0);
        assert!((nordheim_y_from_f(0.629).unwrap() - 0.79310).abs() < 1e-5);
        assert!(nordheim_y_from_f(-0.1).is_err());
    }

    #[test]
    fn variant_parsing() {
        assert_eq!("hp".parse::<SmfVariant>().unwrap(), Hp);
        assert_eq!("FD06".parse::<SmfVariant>().unwrap(), Sg);
        assert!("exact".parse::<SmfVariant>().is_err());
    }

    mod props {
        use super::*;
        use proptest::prelude::*;

        proptest! {
            #[test]
            fn derivative_consistency(x in 0.05f64..0.95) {
                let h = 1e-6;
                let fd = (v_fd(x - h, Hp).unwrap() - v_fd(x + h, Hp).unwrap()) / (2.0 * h);
                prop_assert!((fd - u_fd(x, Hp).unwrap()).abs() < 1e-5);
            }

            #[test]
            fn t_minus_s_identity(x in 1e-6f64..=1.0) {
                for var in [Sg, Hp] {
                    let lhs = t_fd(x, var).unwrap() - s_fd(x, var).unwrap();
                    let rhs = x * u_fd(x, var).unwrap() / 3.0;
                    prop_assert!((lhs - rhs).abs() < 1e-12);
                }
            }

            #[test]
            fn monotone_decreasing(x in 1e-4f64..0.999, dx in 1e-4f64..1e-3) {
                let y = (x + dx).min(1.0);
                for var in [Sg, Hp] {
                    prop_assert!(v_fd(y, var).unwrap() < v_fd(x, var).unwrap());
                    prop_assert!(s_fd(y, var).unwrap() < s_fd(x, var).unwrap());
                    prop_assert!(r_fd(6.0, y, var).unwrap() < r_fd(6.0, x, var).unwrap());
                }
            }
        }
    }
}
