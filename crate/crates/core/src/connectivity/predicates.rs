//! Filtered orientation and power predicates.
//!
//! Both predicates evaluate the determinant in floating point together with
//! its permanent (the same expansion with absolute values). A determinant
//! within `REL_TOL * permanent` of zero is reported as [`Sign::Zero`] so the
//! caller can perturb and retry instead of trusting a sign lost to rounding.

pub(crate) const REL_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Negative,
    Zero,
    Positive,
}

fn classify(det: f64, perm: f64) -> Sign {
    if det > REL_TOL * perm {
        Sign::Positive
    } else if det < -REL_TOL * perm {
        Sign::Negative
    } else {
        Sign::Zero
    }
}

#[inline]
fn det3(r0: [f64; 3], r1: [f64; 3], r2: [f64; 3]) -> (f64, f64) {
    let t = [
        r0[0] * r1[1] * r2[2],
        r0[1] * r1[2] * r2[0],
        r0[2] * r1[0] * r2[1],
        r0[2] * r1[1] * r2[0],
        r0[0] * r1[2] * r2[1],
        r0[1] * r1[0] * r2[2],
    ];
    let det = t[0] + t[1] + t[2] - t[3] - t[4] - t[5];
    let perm = t.iter().map(|v| v.abs()).sum();
    (det, perm)
}

#[inline]
fn sub(a: [f64; 3], b: [f64; 3]) -> [f64; 3] {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}

/// Sign of `det[b - a, c - a, d - a]`: positive when `d` lies on the side of
/// plane `abc` that `(b - a) x (c - a)` points to.
pub fn orient3d(a: [f64; 3], b: [f64; 3], c: [f64; 3], d: [f64; 3]) -> Sign {
    let (det, perm) = det3(sub(b, a), sub(c, a), sub(d, a));
    classify(det, perm)
}

/// For a positively oriented tetrahedron `abcd` with weights `w`, returns
/// `Positive` when the weighted point `(e, we)` is closer (in power distance)
/// to the orthocenter than the orthosphere itself, i.e. `e` conflicts with the
/// tetrahedron; `Negative` when it does not.
pub fn power_test(pts: [[f64; 3]; 4], w: [f64; 4], e: [f64; 3], we: f64) -> Sign {
    let mut rows = [[0.0; 4]; 4];
    for i in 0..4 {
        let d = sub(pts[i], e);
        rows[i] = [
            d[0],
            d[1],
            d[2],
            d[0] * d[0] + d[1] * d[1] + d[2] * d[2] - w[i] + we,
        ];
    }
    let xyz = |i: usize| [rows[i][0], rows[i][1], rows[i][2]];
    let minors = [
        det3(xyz(1), xyz(2), xyz(3)),
        det3(xyz(0), xyz(2), xyz(3)),
        det3(xyz(0), xyz(1), xyz(3)),
        det3(xyz(0), xyz(1), xyz(2)),
    ];
    let mut det = 0.0;
    let mut perm = 0.0;
    for (i, (m, p)) in minors.iter().enumerate() {
        let l = rows[i][3];
        if i % 2 == 0 {
            det -= l * m;
        } else {
            det += l * m;
        }
        perm += l.abs() * p;
    }
    // The determinant is negative for a conflicting point.
    classify(-det, perm)
}
