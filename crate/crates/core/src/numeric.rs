//! Small numeric helpers shared by the spectral code: compensated sums,
//! real powers of magnitudes, and the fixed 12-significant-digit decimal
//! rendering used in every report.

use serde::Serializer;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut acc = CompensatedSum::new();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of a sequence.
pub fn sum(values: impl IntoIterator<Item = f64>) -> f64 {
    values.into_iter().collect::<CompensatedSum>().value()
}

/// Largest exponent handled by repeated multiplication.
const SMALL_INTEGER_POWER: f64 = 16.0;

/// `|x|^p` with `0^p = 0`. Small integer exponents use repeated
/// multiplication; everything else goes through `exp(p ln |x|)`.
pub fn abs_pow(x: f64, p: f64) -> f64 {
    let a = x.abs();
    if a == 0.0 {
        return 0.0;
    }
    if p.fract() == 0.0 && (1.0..=SMALL_INTEGER_POWER).contains(&p) {
        let mut acc = a;
        for _ in 1..(p as u32) {
            acc *= a;
        }
        acc
    } else {
        (p * a.ln()).exp()
    }
}

/// Render `x` with 12 significant digits, trailing zeros removed.
/// Values with decimal exponent in `-5..12` use positional notation,
/// others use `d.ddde±x`.
pub fn sig12(x: f64) -> String {
    if x.is_nan() {
        return "NaN".into();
    }
    if x.is_infinite() {
        return if x > 0.0 { "inf".into() } else { "-inf".into() };
    }
    if x == 0.0 {
        return "0".into();
    }
    let sci = format!("{:.11e}", x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent marker");
    let exp: i32 = exp.parse().expect("integer exponent");
    if (-5..12).contains(&exp) {
        let decimals = (11 - exp) as usize;
        trim_zeros(&format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa), exp)
    }
}

fn trim_zeros(s: &str) -> String {
    if s.contains('.') {
        let t = s.trim_end_matches('0').trim_end_matches('.');
        if t == "-0" {
            "0".into()
        } else {
            t.to_string()
        }
    } else {
        s.to_string()
    }
}

/// Serde adapters writing floats as [`sig12`] strings.
pub mod decimal {
    use super::*;

    pub fn serialize<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&sig12(*x))
    }

    pub mod option {
        use super::*;

        pub fn serialize<S: Serializer>(x: &Option<f64>, s: S) -> Result<S::Ok, S::Error> {
            match x {
                Some(v) => s.serialize_str(&sig12(*v)),
                None => s.serialize_none(),
            }
        }
    }

    pub mod vec {
        use super::*;
        use serde::ser::SerializeSeq;

        pub fn serialize<S: Serializer>(xs: &[f64], s: S) -> Result<S::Ok, S::Error> {
            let mut seq = s.serialize_seq(Some(xs.len()))?;
            for x in xs {
                seq.serialize_element(&sig12(*x))?;
            }
            seq.end()
        }
    }
}
