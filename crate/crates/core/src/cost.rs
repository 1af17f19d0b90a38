//! Unsigned path costs with a reserved "unreached" sentinel.

/// Path or edge cost. Always unsigned; negative weights are not representable.
pub type Cost = u64;

/// Unreached sentinel and saturation ceiling for cost arithmetic.
///
/// Edge weights must be strictly below this value.
pub const INF: Cost = Cost::MAX;

/// Adds two costs, clamping at [`INF`] instead of wrapping.
///
/// The result is never smaller than either operand, so extending a path can
/// not make it cheaper.
#[inline]
pub fn saturating_add(a: Cost, b: Cost) -> Cost {
    a.saturating_add(b)
}
