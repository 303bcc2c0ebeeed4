//! Reference computations shared by the integration suites. None of these
//! call into the library code they are used to check.

#![allow(dead_code)]

use std::io::Write;

/// Forward Euler integration of the unicycle with `steps` substeps. The
/// heading is advanced by an exact rotation each substep instead of calling
/// sin/cos, which keeps 10^6-substep runs cheap.
pub fn euler_unicycle(x: f64, y: f64, theta: f64, v: f64, omega: f64, dt: f64, steps: usize) -> (f64, f64) {
    let h = dt / steps as f64;
    let (rc, rs) = ((omega * h).cos(), (omega * h).sin());
    let (mut c, mut s) = (theta.cos(), theta.sin());
    let (mut px, mut py) = (x, y);
    for _ in 0..steps {
        px += v * c * h;
        py += v * s * h;
        let nc = c * rc - s * rs;
        s = s * rc + c * rs;
        c = nc;
    }
    (px, py)
}

/// Axis-aligned rectangle as `[x_min, y_min, x_max, y_max]`.
pub type Box2 = [f64; 4];

pub fn inside(p: (f64, f64), r: &Box2) -> bool {
    r[0] <= p.0 && p.0 <= r[2] && r[1] <= p.1 && p.1 <= r[3]
}

/// Points along the rectangle boundary no further apart than `spacing`.
pub fn boundary_samples(r: &Box2, spacing: f64) -> Vec<(f64, f64)> {
    let mut out = Vec::new();
    let mut edge = |a: (f64, f64), b: (f64, f64)| {
        let len = ((b.0 - a.0).powi(2) + (b.1 - a.1).powi(2)).sqrt();
        let n = (len / spacing).ceil().max(1.0) as usize;
        for k in 0..=n {
            let t = k as f64 / n as f64;
            out.push((a.0 + t * (b.0 - a.0), a.1 + t * (b.1 - a.1)));
        }
    };
    edge((r[0], r[1]), (r[2], r[1]));
    edge((r[2], r[1]), (r[2], r[3]));
    edge((r[2], r[3]), (r[0], r[3]));
    edge((r[0], r[3]), (r[0], r[1]));
    out
}

/// Body clearance by dense boundary sampling: distance to the nearest
/// sampled boundary point (zero inside a rectangle) minus the radius,
/// floored at zero.
pub fn sampled_clearance(p: (f64, f64), obstacles: &[Box2], radius: f64, spacing: f64) -> f64 {
    let mut best = f64::INFINITY;
    for r in obstacles {
        if inside(p, r) {
            best = 0.0;
            break;
        }
        for q in boundary_samples(r, spacing) {
            best = best.min(((p.0 - q.0).powi(2) + (p.1 - q.1).powi(2)).sqrt());
        }
    }
    (best - radius).max(0.0)
}

/// Exact center distance to a rectangle via clamping.
pub fn clamp_distance(p: (f64, f64), r: &Box2) -> f64 {
    let qx = p.0.clamp(r[0], r[2]);
    let qy = p.1.clamp(r[1], r[3]);
    ((p.0 - qx).powi(2) + (p.1 - qy).powi(2)).sqrt()
}

/// Disc of `radius` at `p` touches an obstacle or the arena boundary.
pub fn disc_collides(p: (f64, f64), radius: f64, arena: &Box2, obstacles: &[Box2]) -> bool {
    let wall = (p.0 - arena[0]).min(arena[2] - p.0).min(p.1 - arena[1]).min(arena[3] - p.1);
    wall <= radius || obstacles.iter().any(|r| clamp_distance(p, r) <= radius)
}

/// Writes straight to stdout so the line shows even when the harness
/// captures test output.
pub fn verdict(id: &str, pass: bool, detail: &str) {
    let line = format!("[{}] {id}: {detail}\n", if pass { "PASS" } else { "FAIL" });
    let mut out = std::io::stdout().lock();
    let _ = out.write_all(line.as_bytes());
    let _ = out.flush();
}
