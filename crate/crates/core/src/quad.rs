//! One-dimensional building blocks for the planar integrals: a 21-point
//! Gauss-Kronrod rule with adaptive bisection, and the trapezoid rule for
//! smooth periodic integrands. Integrands are complex valued and may carry
//! their own error (from an inner integration), which is propagated.

#![allow(clippy::excessive_precision)]

use std::cell::Cell;
use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_complex::Complex64;

/// A value with an absolute error estimate.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct Estimate {
    pub value: Complex64,
    pub error: f64,
}

impl Estimate {
    pub fn exact(value: Complex64) -> Self {
        Estimate { value, error: 0.0 }
    }
}

impl std::ops::Add for Estimate {
    type Output = Estimate;

    fn add(self, rhs: Estimate) -> Estimate {
        Estimate {
            value: self.value + rhs.value,
            error: self.error + rhs.error,
        }
    }
}

/// Shared cap on integrand evaluations.
#[derive(Debug)]
pub struct Budget {
    used: Cell<usize>,
    limit: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget {
            used: Cell::new(0),
            limit,
        }
    }

    pub fn charge(&self, n: usize) {
        self.used.set(self.used.get() + n);
    }

    pub fn used(&self) -> usize {
        self.used.get()
    }

    pub fn exhausted(&self) -> bool {
        self.used.get() >= self.limit
    }
}

// Kronrod abscissae on [0, 1]; odd entries are the 10-point Gauss nodes.
const XGK: [f64; 11] = [
    0.995_657_163_025_808_080_735_527_280_689,
    0.973_906_528_517_171_720_077_964_012_084,
    0.930_157_491_355_708_226_001_207_180_060,
    0.865_063_366_688_984_510_732_096_688_423,
    0.780_817_726_586_416_897_063_717_578_345,
    0.679_409_568_299_024_406_234_327_365_115,
    0.562_757_134_668_604_683_339_000_099_273,
    0.433_395_394_129_247_190_799_265_943_166,
    0.294_392_862_701_460_198_131_126_603_104,
    0.148_874_338_981_631_210_884_826_001_130,
    0.0,
];

const WGK: [f64; 11] = [
    0.011_694_638_867_371_874_278_064_396_062,
    0.032_558_162_307_964_727_478_818_972_459,
    0.054_755_896_574_351_996_031_381_300_245,
    0.075_039_674_810_919_952_767_043_140_916,
    0.093_125_454_583_697_605_535_065_465_083,
    0.109_387_158_802_297_641_899_210_590_326,
    0.123_491_976_262_065_851_077_208_067_142,
    0.134_709_217_311_473_325_928_054_001_772,
    0.142_775_938_577_060_080_797_094_273_139,
    0.147_739_104_901_338_491_374_841_515_972,
    0.149_445_554_002_916_905_664_936_468_390,
];

// Gauss weights for XGK[1], XGK[3], ..., XGK[9].
const WG: [f64; 5] = [
    0.066_671_344_308_688_137_593_568_809_893,
    0.149_451_349_150_580_593_145_776_339_658,
    0.219_086_362_515_982_043_995_534_934_228,
    0.269_266_719_309_996_355_091_226_921_569,
    0.295_524_224_714_752_870_173_892_994_651,
];

/// Applies the 21-point Kronrod rule on `[a, b]`; the error is the
/// Kronrod/Gauss difference plus the weighted inner errors.
pub fn gauss_kronrod<F>(f: &mut F, a: f64, b: f64, budget: &Budget) -> Estimate
where
    F: FnMut(f64) -> Estimate,
{
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let mut kronrod = Complex64::default();
    let mut gauss = Complex64::default();
    let mut inner = 0.0;
    for (j, (&x, &w)) in XGK.iter().zip(&WGK).enumerate() {
        let points: &[f64] = if x == 0.0 {
            &[center]
        } else {
            &[center - half * x, center + half * x]
        };
        for &p in points {
            let e = f(p);
            kronrod += e.value * w;
            inner += e.error * w;
            if j % 2 == 1 {
                gauss += e.value * WG[j / 2];
            }
        }
    }
    budget.charge(21);
    Estimate {
        value: kronrod * half,
        error: ((kronrod - gauss) * half).norm() + inner * half.abs(),
    }
}

struct Panel {
    a: f64,
    b: f64,
    est: Estimate,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.est.error.total_cmp(&other.est.error)
    }
}

/// Result of an adaptive integration, with the number of panels used.
#[derive(Debug, Clone, Copy)]
pub struct Adaptive {
    pub estimate: Estimate,
    pub panels: usize,
}

const MAX_PANELS: usize = 4000;

/// Bisects the panel with the largest error until the summed error is at
/// most `tol`, the budget runs out, or panels get too small to split.
pub fn adaptive<F>(f: &mut F, a: f64, b: f64, tol: f64, budget: &Budget) -> Adaptive
where
    F: FnMut(f64) -> Estimate,
{
    let first = gauss_kronrod(f, a, b, budget);
    let mut heap = BinaryHeap::from([Panel { a, b, est: first }]);
    let mut total = first;
    let mut panels = 1;
    while total.error > tol && !budget.exhausted() && panels < MAX_PANELS {
        let worst = heap.pop().expect("heap is never empty");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            heap.push(worst);
            break;
        }
        let left = gauss_kronrod(f, worst.a, mid, budget);
        let right = gauss_kronrod(f, mid, worst.b, budget);
        total.value += left.value + right.value - worst.est.value;
        heap.push(Panel {
            a: worst.a,
            b: mid,
            est: left,
        });
        heap.push(Panel {
            a: mid,
            b: worst.b,
            est: right,
        });
        panels += 1;
        // re-sum errors to avoid drift from repeated subtraction
        total.error = heap.iter().map(|p| p.est.error).sum();
    }
    // re-sum values as well for the same reason
    total.value = heap.iter().map(|p| p.est.value).sum();
    Adaptive {
        estimate: total,
        panels,
    }
}

/// Trapezoid rule over one period `[0, 2 pi)`, doubling the number of
/// points until two successive sums agree to within `tol`. The reported
/// error is that difference.
pub fn periodic<F>(f: &mut F, tol: f64, budget: &Budget) -> Estimate
where
    F: FnMut(f64) -> Complex64,
{
    const START: usize = 16;
    const MAX_POINTS: usize = 1 << 14;
    let tau = std::f64::consts::TAU;
    let mut n = START;
    let mut sum: Complex64 = (0..n).map(|j| f(tau * j as f64 / n as f64)).sum();
    budget.charge(n);
    let mut value = sum * (tau / n as f64);
    loop {
        let mid: Complex64 = (0..n).map(|j| f(tau * (j as f64 + 0.5) / n as f64)).sum();
        budget.charge(n);
        sum += mid;
        n *= 2;
        let refined = sum * (tau / n as f64);
        let diff = (refined - value).norm();
        value = refined;
        if diff <= tol || n >= MAX_POINTS || budget.exhausted() {
            return Estimate { value, error: diff };
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn real(x: f64) -> Estimate {
        Estimate::exact(Complex64::new(x, 0.0))
    }

    #[test]
    fn kronrod_exact_for_degree_31_gauss_for_19() {
        let budget = Budget::new(usize::MAX);
        for deg in 0..=31 {
            let est = gauss_kronrod(&mut |x: f64| real(x.powi(deg)), 0.0, 1.0, &budget);
            let exact = 1.0 / (deg + 1) as f64;
            assert!((est.value.re - exact).abs() < 1e-14, "degree {deg}");
            if deg <= 19 {
                // Gauss part agrees as well, so the difference vanishes
                assert!(est.error < 1e-14, "degree {deg}: {}", est.error);
            }
        }
    }

    #[test]
    fn weights_sum_to_two() {
        let k: f64 = WGK[10] + 2.0 * WGK[..10].iter().sum::<f64>();
        let g: f64 = 2.0 * WG.iter().sum::<f64>();
        assert!((k - 2.0).abs() < 1e-15);
        assert!((g - 2.0).abs() < 1e-15);
    }

    #[test]
    fn adaptive_handles_endpoint_singularity() {
        let budget = Budget::new(10_000_000);
        let res = adaptive(&mut |x: f64| real(x.powf(-0.5)), 0.0, 1.0, 1e-10, &budget);
        assert!((res.estimate.value.re - 2.0).abs() <= res.estimate.error.max(1e-12));
        assert!(res.estimate.error <= 1e-10);
        assert!(res.panels > 1);
    }

    #[test]
    fn inner_errors_propagate() {
        let budget = Budget::new(usize::MAX);
        let est = gauss_kronrod(
            &mut |_| Estimate {
                value: Complex64::new(1.0, 0.0),
                error: 0.5,
            },
            0.0,
            4.0,
            &budget,
        );
        assert!((est.value.re - 4.0).abs() < 1e-13);
        assert!((est.error - 2.0).abs() < 1e-13);
    }

    #[test]
    fn periodic_trapezoid_converges_geometrically() {
        let budget = Budget::new(usize::MAX);
        // mean of 1 / (1 - cos(t)/2) over a period is 2/sqrt(3)
        let est = periodic(
            &mut |t: f64| Complex64::new(1.0 / (1.0 - 0.5 * t.cos()), 0.0),
            1e-13,
            &budget,
        );
        let exact = std::f64::consts::TAU * 2.0 / 3f64.sqrt();
        assert!((est.value.re - exact).abs() < 1e-12);
        assert!(budget.used() < 200);
    }

    #[test]
    fn budget_stops_refinement() {
        let budget = Budget::new(100);
        let res = adaptive(&mut |x: f64| real(x.powf(-0.9)), 0.0, 1.0, 1e-14, &budget);
        assert!(budget.exhausted());
        assert!(res.estimate.error > 1e-14);
    }
}
