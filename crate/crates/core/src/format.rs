//! Numeric output conventions and seed derivation.
//!
//! Every floating-point value leaving the crate is printed with nine
//! significant digits. Values that must round-trip through text (generated
//! positions, delays, reliabilities) are quantized to the same nine digits
//! when they are created, so parsing the printed form recovers the exact
//! `f64`.

use serde::Serializer;

/// Significant digits used for all printed floats.
pub const SIG_DIGITS: usize = 9;

/// Formats `x` like C's `%.9g`.
pub fn sig9(x: f64) -> String {
    if x == 0.0 {
        return "0".to_string();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", SIG_DIGITS - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("exponent");
    let exp: i32 = exp.parse().expect("exponent digits");
    if (-4..SIG_DIGITS as i32).contains(&exp) {
        let decimals = (SIG_DIGITS as i32 - 1 - exp).max(0) as usize;
        trim_zeros(format!("{:.*}", decimals, x))
    } else {
        format!("{}e{}", trim_zeros(mantissa.to_string()), exp)
    }
}

fn trim_zeros(s: String) -> String {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    } else {
        s
    }
}

/// Rounds `x` to the nearest `f64` of its nine-significant-digit decimal form.
pub fn quantize(x: f64) -> f64 {
    sig9(x).parse().expect("sig9 output parses")
}

/// `serialize_with` helper emitting a quantized float.
pub fn ser_sig9<S: Serializer>(x: &f64, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_f64(quantize(*x))
}

/// `serialize_with` helper for maps of floats.
pub fn ser_sig9_map<S, K>(map: &std::collections::BTreeMap<K, f64>, s: S) -> Result<S::Ok, S::Error>
where
    S: Serializer,
    K: serde::Serialize,
{
    use serde::ser::SerializeMap;
    let mut m = s.serialize_map(Some(map.len()))?;
    for (k, v) in map {
        m.serialize_entry(k, &quantize(*v))?;
    }
    m.end()
}

fn splitmix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Derives an independent sub-seed from a parent seed and a sequence of
/// indices. Stable across platforms and releases.
pub fn derive_seed(parent: u64, parts: &[u64]) -> u64 {
    parts.iter().fold(splitmix64(parent), |acc, &p| {
        splitmix64(acc ^ splitmix64(p))
    })
}
