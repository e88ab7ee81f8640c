//! Extended-precision evaluation helpers.
//!
//! Used where a double-precision result is not trustworthy on its own: the
//! floor in the degree formula near an integer boundary, and certification of
//! optimizer solutions. All values carry [`BITS`] bits of mantissa (about 38
//! decimal digits) unless a caller asks for more.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

pub type Big = FBig<HalfEven, 2>;

/// Default working precision in bits.
pub const BITS: usize = 128;

pub fn from_f64(v: f64, bits: usize) -> Big {
    Big::try_from(v)
        .expect("finite f64")
        .with_precision(bits)
        .value()
}

pub fn from_u64(v: u64, bits: usize) -> Big {
    Big::from(v).with_precision(bits).value()
}

pub fn to_f64(v: &Big) -> f64 {
    v.to_f64().value()
}

pub fn ln2(bits: usize) -> Big {
    from_u64(2, bits).ln()
}

/// Floor of a high-precision value as a signed integer.
pub fn floor_i64(v: &Big) -> i64 {
    let f = v.floor();
    to_f64(&f) as i64
}
