//! Shared, independently-coded oracles used by the integration tests.
//!
//! These are deliberately written from first principles (finite series,
//! closed-form moments, explicit recurrences) rather than calling back into
//! the library paths under test, so a bug in the library cannot hide itself.

#![allow(dead_code)]

/// Double-double value (~31 significant digits), enough headroom that the
/// cancellation inside a degree-20 Jacobi series costs nothing.
#[derive(Clone, Copy, Debug)]
pub struct Dd {
    hi: f64,
    lo: f64,
}

impl Dd {
    pub fn from(x: f64) -> Dd {
        Dd { hi: x, lo: 0.0 }
    }
    pub fn to_f64(self) -> f64 {
        self.hi + self.lo
    }
    fn renorm(s: f64, e: f64) -> Dd {
        let hi = s + e;
        let lo = e - (hi - s);
        Dd { hi, lo }
    }
    pub fn add(self, o: Dd) -> Dd {
        let s = self.hi + o.hi;
        let bb = s - self.hi;
        let err = (self.hi - (s - bb)) + (o.hi - bb) + self.lo + o.lo;
        Dd::renorm(s, err)
    }
    pub fn mul(self, o: Dd) -> Dd {
        let p = self.hi * o.hi;
        let err = self.hi.mul_add(o.hi, -p) + self.hi * o.lo + self.lo * o.hi;
        Dd::renorm(p, err)
    }
    pub fn div(self, o: Dd) -> Dd {
        let q1 = self.hi / o.hi;
        let r = self.add(o.mul(Dd::from(-q1)));
        let q2 = (r.hi + r.lo) / (o.hi + o.lo);
        Dd::renorm(q1, q2)
    }
}

/// Direct finite series for the Jacobi polynomial in its homogeneous-product
/// form,
/// `P_n^(a,b)(t) = sum_s C(n+a, n-s) C(n+b, s) ((t-1)/2)^s ((t+1)/2)^(n-s)`,
/// evaluated in double-double arithmetic so the oracle value is correct to
/// well below 1e-11 despite the alternating sum.
pub fn jacobi_series(n: usize, a: f64, b: f64, t: f64) -> f64 {
    let p = Dd::from(t).add(Dd::from(-1.0)).mul(Dd::from(0.5));
    let q = Dd::from(t).add(Dd::from(1.0)).mul(Dd::from(0.5));
    let binom_real = |top: f64, k: usize| {
        // C(top, k) = (top - k + 1)_k / k!
        let mut v = Dd::from(1.0);
        for i in 0..k {
            v = v
                .mul(Dd::from(top - k as f64 + 1.0 + i as f64))
                .div(Dd::from(i as f64 + 1.0));
        }
        v
    };
    let powi = |base: Dd, k: usize| {
        let mut v = Dd::from(1.0);
        for _ in 0..k {
            v = v.mul(base);
        }
        v
    };
    let mut sum = Dd::from(0.0);
    for s in 0..=n {
        let term = binom_real(n as f64 + a, n - s)
            .mul(binom_real(n as f64 + b, s))
            .mul(powi(p, s))
            .mul(powi(q, n - s));
        sum = sum.add(term);
    }
    sum.to_f64()
}

/// Classical Gegenbauer polynomial by its three-term recurrence.
pub fn gegenbauer_recurrence(n: usize, lambda: f64, t: f64) -> f64 {
    if n == 0 {
        return 1.0;
    }
    let mut cm1 = 1.0;
    let mut c = 2.0 * lambda * t;
    for k in 2..=n {
        let kf = k as f64;
        let next = (2.0 * t * (kf + lambda - 1.0) * c - (kf + 2.0 * lambda - 2.0) * cm1) / kf;
        cm1 = c;
        c = next;
    }
    c
}

/// Central finite differences of a bivariate function, order 1 and 2.
pub fn fd2(
    f: &dyn Fn(f64, f64) -> f64,
    x: f64,
    y: f64,
    h: f64,
) -> (f64, f64, f64, f64, f64) {
    let du = (f(x + h, y) - f(x - h, y)) / (2.0 * h);
    let dv = (f(x, y + h) - f(x, y - h)) / (2.0 * h);
    let duu = (f(x + h, y) - 2.0 * f(x, y) + f(x - h, y)) / (h * h);
    let dvv = (f(x, y + h) - 2.0 * f(x, y) + f(x, y - h)) / (h * h);
    let duv =
        (f(x + h, y + h) - f(x + h, y - h) - f(x - h, y + h) + f(x - h, y - h)) / (4.0 * h * h);
    (du, dv, duu, duv, dvv)
}

/// Simple deterministic xorshift generator so oracle sample points are
/// reproducible without external crates.
pub struct XorShift(pub u64);

impl XorShift {
    pub fn new(seed: u64) -> Self {
        XorShift(seed.max(1))
    }
    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x
    }
    /// Uniform in [0, 1).
    pub fn uniform(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 / (1u64 << 53) as f64
    }
    /// Uniform in [lo, hi).
    pub fn range(&mut self, lo: f64, hi: f64) -> f64 {
        lo + (hi - lo) * self.uniform()
    }
}
