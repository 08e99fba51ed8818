use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

use rand::Rng;
use rand_distr::StandardNormal;

use crate::math;

/// Value carried by a trace site.
#[derive(Clone, PartialEq, Debug)]
pub enum Value {
    Real(f64),
    Vec2([f64; 2]),
    Vec3([f64; 3]),
    Bool(bool),
    /// Category index of a categorical draw.
    Index(usize),
}

impl Value {
    pub fn kind(&self) -> &'static str {
        match self {
            Value::Real(_) => "real",
            Value::Vec2(_) => "vec2",
            Value::Vec3(_) => "vec3",
            Value::Bool(_) => "bool",
            Value::Index(_) => "index",
        }
    }

    pub fn as_real(&self) -> Option<f64> {
        match self {
            Value::Real(x) => Some(*x),
            _ => None,
        }
    }

    pub fn as_vec2(&self) -> Option<[f64; 2]> {
        match self {
            Value::Vec2(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_vec3(&self) -> Option<[f64; 3]> {
        match self {
            Value::Vec3(v) => Some(*v),
            _ => None,
        }
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self {
            Value::Bool(b) => Some(*b),
            _ => None,
        }
    }

    pub fn as_index(&self) -> Option<usize> {
        match self {
            Value::Index(i) => Some(*i),
            _ => None,
        }
    }
}

/// Primitive distributions a model can draw from.
#[derive(Clone, PartialEq, Debug)]
pub enum Distribution {
    GaussianScalar { mean: f64, sigma: f64 },
    /// Independent Gaussian noise with a shared sigma on all three axes.
    GaussianIsotropic3 { mean: [f64; 3], sigma: f64 },
    Bernoulli { p: f64 },
    /// Probabilities proportional to the (non-negative) weights.
    Categorical { weights: Vec<f64> },
    UniformContinuous { lo: f64, hi: f64 },
    /// Point mass; the only distribution over non-numeric values, and the
    /// way deterministic quantities are recorded at named sites.
    Delta { value: Value },
}

impl Distribution {
    pub fn delta(value: Value) -> Self {
        Distribution::Delta { value }
    }

    /// Checks parameter domains. Returns a static reason on failure.
    pub(crate) fn validate(&self) -> Result<(), &'static str> {
        match self {
            Distribution::GaussianScalar { mean, sigma } => {
                if !mean.is_finite() || !sigma.is_finite() {
                    Err("gaussian parameters must be finite")
                } else if *sigma < 0.0 {
                    Err("gaussian sigma must be >= 0")
                } else {
                    Ok(())
                }
            }
            Distribution::GaussianIsotropic3 { mean, sigma } => {
                if mean.iter().any(|m| !m.is_finite()) || !sigma.is_finite() {
                    Err("gaussian parameters must be finite")
                } else if *sigma < 0.0 {
                    Err("gaussian sigma must be >= 0")
                } else {
                    Ok(())
                }
            }
            Distribution::Bernoulli { p } => {
                if !(0.0..=1.0).contains(p) {
                    Err("bernoulli p must lie in [0, 1]")
                } else {
                    Ok(())
                }
            }
            Distribution::Categorical { weights } => {
                if weights.is_empty() {
                    Err("categorical needs at least one weight")
                } else if weights.iter().any(|w| !w.is_finite() || *w < 0.0) {
                    Err("categorical weights must be finite and >= 0")
                } else if weights.iter().sum::<f64>() <= 0.0 {
                    Err("categorical weights must not all be zero")
                } else {
                    Ok(())
                }
            }
            Distribution::UniformContinuous { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() {
                    Err("uniform bounds must be finite")
                } else if lo >= hi {
                    Err("uniform needs lo < hi")
                } else {
                    Ok(())
                }
            }
            Distribution::Delta { .. } => Ok(()),
        }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Value {
        match self {
            Distribution::GaussianScalar { mean, sigma } => {
                let z: f64 = rng.sample(StandardNormal);
                Value::Real(mean + sigma * z)
            }
            Distribution::GaussianIsotropic3 { mean, sigma } => {
                let mut v = [0.0; 3];
                for (out, m) in v.iter_mut().zip(mean.iter()) {
                    let z: f64 = rng.sample(StandardNormal);
                    *out = m + sigma * z;
                }
                Value::Vec3(v)
            }
            Distribution::Bernoulli { p } => Value::Bool(rng.gen::<f64>() < *p),
            Distribution::Categorical { weights } => {
                let total: f64 = weights.iter().sum();
                let mut u = rng.gen::<f64>() * total;
                let mut chosen = weights.len() - 1;
                for (i, w) in weights.iter().enumerate() {
                    if u < *w {
                        chosen = i;
                        break;
                    }
                    u -= w;
                }
                Value::Index(chosen)
            }
            Distribution::UniformContinuous { lo, hi } => {
                Value::Real(lo + (hi - lo) * rng.gen::<f64>())
            }
            Distribution::Delta { value } => value.clone(),
        }
    }

    /// Log-density (or log-mass) of `value`. `Err` carries the expected
    /// value kind when `value` has the wrong type; off-support values of the
    /// right type yield `-inf`. Zero-sigma Gaussians behave as point masses.
    pub(crate) fn log_density(&self, value: &Value) -> Result<f64, &'static str> {
        match self {
            Distribution::GaussianScalar { mean, sigma } => {
                let x = value.as_real().ok_or("real")?;
                Ok(gaussian_log_density(x, *mean, *sigma))
            }
            Distribution::GaussianIsotropic3 { mean, sigma } => {
                let v = value.as_vec3().ok_or("vec3")?;
                Ok(v.iter()
                    .zip(mean.iter())
                    .map(|(x, m)| gaussian_log_density(*x, *m, *sigma))
                    .sum())
            }
            Distribution::Bernoulli { p } => {
                let b = value.as_bool().ok_or("bool")?;
                let q = if b { *p } else { 1.0 - *p };
                Ok(math::ln(q))
            }
            Distribution::Categorical { weights } => {
                let i = value.as_index().ok_or("index")?;
                let total: f64 = weights.iter().sum();
                match weights.get(i) {
                    Some(w) => Ok(math::ln(w / total)),
                    None => Ok(f64::NEG_INFINITY),
                }
            }
            Distribution::UniformContinuous { lo, hi } => {
                let x = value.as_real().ok_or("real")?;
                if x >= *lo && x <= *hi {
                    Ok(-math::ln(hi - lo))
                } else {
                    Ok(f64::NEG_INFINITY)
                }
            }
            Distribution::Delta { value: v } => {
                if v == value {
                    Ok(0.0)
                } else if v.kind() != value.kind() {
                    Err(v.kind())
                } else {
                    Ok(f64::NEG_INFINITY)
                }
            }
        }
    }

    /// Support of a finite-support distribution as `(value, probability)`
    /// pairs, `None` for continuous distributions. Zero-sigma Gaussians stay
    /// `None`: they are point masses only almost surely, and exact
    /// enumeration does not special-case them.
    pub(crate) fn finite_support(&self) -> Option<Vec<(Value, f64)>> {
        match self {
            Distribution::Bernoulli { p } => Some(vec![
                (Value::Bool(false), 1.0 - *p),
                (Value::Bool(true), *p),
            ]),
            Distribution::Categorical { weights } => {
                let total: f64 = weights.iter().sum();
                Some(
                    weights
                        .iter()
                        .enumerate()
                        .map(|(i, w)| (Value::Index(i), w / total))
                        .collect(),
                )
            }
            Distribution::Delta { value } => Some(vec![(value.clone(), 1.0)]),
            _ => None,
        }
    }
}

fn gaussian_log_density(x: f64, mean: f64, sigma: f64) -> f64 {
    if sigma == 0.0 {
        return if x == mean { 0.0 } else { f64::NEG_INFINITY };
    }
    let z = (x - mean) / sigma;
    -0.5 * z * z - math::ln(sigma) - 0.5 * math::ln(2.0 * PI)
}
