//! Seeded interior point sampling. All randomness flows through one
//! ChaCha8 stream per run, so a fixed `--seed` fixes every sample set
//! regardless of thread count (points are drawn serially; only the work
//! done at each point is parallelized).

use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::f64::consts::TAU;
use symdom::curved2d::{self, DomainParams2};
use symdom::revolution::{rev_psi_inv, RevDomainParams};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Interior point of the planar domain, built on the half-disk side so
/// containment is guaranteed; the height coordinate stays at or above the
/// library's singular-coefficient floor (0.05) on both sides of the map.
pub fn planar_point(rng: &mut ChaCha8Rng, dp: &DomainParams2) -> [f64; 2] {
    loop {
        let s = rng.random_range(-0.95..0.95);
        let t = rng.random_range(0.07..0.95);
        if s * s + t * t < 0.99 {
            let pt = curved2d::psi_inv(dp, [s, t]).expect("sampled inside the half disk");
            if pt[1] >= 0.05 {
                return pt;
            }
        }
    }
}

/// Interior point of the solid of revolution, built on the half-ball side.
pub fn solid_point(rng: &mut ChaCha8Rng, dp: &RevDomainParams) -> [f64; 3] {
    loop {
        let r = rng.random_range(0.0..0.95);
        let th = rng.random_range(0.0..TAU);
        let v = rng.random_range(0.07..0.95);
        let y = [r * th.cos(), r * th.sin(), v];
        if y[0] * y[0] + y[1] * y[1] + y[2] * y[2] < 0.99 {
            let p = rev_psi_inv(dp, y).expect("sampled inside the half ball");
            if p[2] >= 0.05 {
                return p;
            }
        }
    }
}

/// Half-disk point with small margins off the rim and the axis, the
/// round-trip regime for mapcheck.
pub fn half_disk_point(rng: &mut ChaCha8Rng) -> [f64; 2] {
    loop {
        let s: f64 = rng.random_range(-0.99..0.99);
        let cap = 0.995 * (1.0 - s * s).sqrt();
        if cap <= 0.011 {
            continue;
        }
        let t = rng.random_range(0.01..cap);
        return [s, t];
    }
}

/// Half-ball point with the same margins.
pub fn half_ball_point(rng: &mut ChaCha8Rng) -> [f64; 3] {
    loop {
        let r: f64 = rng.random_range(0.0..0.99);
        let th = rng.random_range(0.0..TAU);
        let cap = 0.995 * (1.0 - r * r).sqrt();
        if cap <= 0.011 {
            continue;
        }
        let v = rng.random_range(0.01..cap);
        return [r * th.cos(), r * th.sin(), v];
    }
}
