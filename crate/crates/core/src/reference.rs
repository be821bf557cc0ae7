//! Published values that the `constants` report and the acceptance suite compare against.
//!
//! Each entry records the digits as printed together with the tolerance they support.

/// Slit endpoint `a` of the extremal slit disk.
pub const A: f64 = 0.024_286_160_621_303_975;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReferenceValue {
    pub name: &'static str,
    pub value: f64,
    pub tolerance: f64,
    pub source: &'static str,
}

pub const S0: ReferenceValue = ReferenceValue {
    name: "s0",
    value: 2.379796,
    tolerance: 1e-5,
    source: "root of the slit-disk radius equation",
};
pub const SLIT_A: ReferenceValue =
    ReferenceValue { name: "a", value: 0.024286, tolerance: 1e-5, source: "slit endpoint a = a(s0)" };
pub const LOG_A: ReferenceValue =
    ReferenceValue { name: "log_a", value: -3.7178547, tolerance: 1e-5, source: "log of the slit endpoint" };
pub const X0: ReferenceValue = ReferenceValue {
    name: "x0",
    value: 0.447_22,
    tolerance: 1e-4,
    source: "maximizer of the slit-disk radius profile, (s0-1)/(2 sqrt s0)",
};
pub const SLIT_MAX_RADIUS: ReferenceValue = ReferenceValue {
    name: "slit_max_radius",
    value: 0.7,
    tolerance: 1e-4,
    source: "maximal conformal radius of the slit disk",
};
pub const C: ReferenceValue =
    ReferenceValue { name: "c", value: 1.098259, tolerance: 1e-4, source: "Schwarz-Christoffel prevertex c" };
pub const D: ReferenceValue =
    ReferenceValue { name: "d", value: 1.766556, tolerance: 1e-4, source: "Schwarz-Christoffel prevertex d" };
pub const R0: ReferenceValue = ReferenceValue {
    name: "r0",
    value: 0.695356,
    tolerance: 1e-4,
    source: "conformal radius of the glued surface at z = -0.0205 + 0.3659i",
};
pub const TWO_OVER_E: ReferenceValue = ReferenceValue {
    name: "two_over_e",
    value: 0.73575,
    tolerance: 1e-5,
    source: "limit of the seminorm of z^n",
};
pub const SQRT3_R0_OVER_4: ReferenceValue = ReferenceValue {
    name: "sqrt3_r0_over_4",
    value: 0.301098,
    tolerance: 1e-5,
    source: "lower bound for f o B, general f with f'(0) = 1",
};
pub const PI_R0_OVER_4: ReferenceValue = ReferenceValue {
    name: "pi_r0_over_4",
    value: 0.546131,
    tolerance: 1e-5,
    source: "lower bound for f o B, convex univalent f",
};

/// Point of the upper half-plane where the surface radius is reported.
pub const R0_POINT: (f64, f64) = (-0.0205, 0.3659);
/// Target value of F(s) (a quarter of the slit-disk radius 0.7).
pub const RADIUS_TARGET: f64 = 0.175;
/// `-log(a)/2`, right-hand side of the second parameter equation.
pub const HALF_NEG_LOG_A: f64 = 1.858927;
/// Lower end of the pointwise bound at an explicit point.
pub const CONSTRUCTIVE_BOUND: f64 = 0.07;

pub const ALL: [ReferenceValue; 11] =
    [S0, SLIT_A, LOG_A, X0, SLIT_MAX_RADIUS, C, D, R0, TWO_OVER_E, SQRT3_R0_OVER_4, PI_R0_OVER_4];
