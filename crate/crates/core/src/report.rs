//! Output formatting shared by every report type: decimal big integers,
//! round-trip float text, complex values, CSV rows.

use num_bigint::BigUint;
use num_complex::Complex64;
use num_traits::ToPrimitive;
use serde::ser::SerializeStruct;
use serde::Serializer;

pub fn big_to_string(x: &BigUint) -> String {
    x.to_str_radix(10)
}

pub fn ser_big<S: Serializer>(x: &BigUint, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(&big_to_string(x))
}

pub fn ser_complex<S: Serializer>(z: &Complex64, s: S) -> Result<S::Ok, S::Error> {
    let mut st = s.serialize_struct("Complex", 2)?;
    st.serialize_field("re", &z.re)?;
    st.serialize_field("im", &z.im)?;
    st.end()
}

/// Nearest `f64` (may be infinite for astronomically large values).
pub fn big_to_f64(x: &BigUint) -> f64 {
    x.to_f64().unwrap_or(f64::INFINITY)
}

/// Natural log of a big integer, finite even when the value overflows `f64`.
pub fn big_ln(x: &BigUint) -> f64 {
    let bits = x.bits();
    if bits < 1000 {
        return big_to_f64(x).ln();
    }
    let shift = bits - 64;
    let top = (x >> shift).to_f64().expect("64-bit value");
    top.ln() + shift as f64 * std::f64::consts::LN_2
}

/// 17 significant digits: enough to round-trip any `f64`.
pub fn fmt_f64(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    format!("{x:.16e}")
}

pub fn fmt_complex(z: Complex64) -> String {
    format!("{}{}{}i", fmt_f64(z.re), if z.im.is_sign_negative() { "" } else { "+" }, fmt_f64(z.im))
}

/// Joins already-formatted fields into one CSV line. Fields containing a
/// comma or quote are quoted.
pub fn csv_line<I, S>(fields: I) -> String
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    fields
        .into_iter()
        .map(|f| {
            let f = f.as_ref();
            if f.contains([',', '"', '\n']) {
                format!("\"{}\"", f.replace('"', "\"\""))
            } else {
                f.to_string()
            }
        })
        .collect::<Vec<_>>()
        .join(",")
}
