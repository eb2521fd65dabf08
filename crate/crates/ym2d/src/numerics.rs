//! Shared numerical utilities: Gauss-Legendre rules and seeded Monte Carlo
//! accumulation with deterministic reduction order.

use rand::rngs::StdRng;
use rand::SeedableRng;

/// Gauss-Legendre nodes and weights on [-1, 1].
#[derive(Debug, Clone)]
pub struct GaussLegendre {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 2);
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        let m = (n + 1) / 2;
        for k in 0..m {
            // initial guess (Abramowitz-Stegun) then Newton on P_n
            let mut x = (std::f64::consts::PI * (k as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (p, d) = legendre_with_derivative(n, x);
                dp = d;
                let dx = p / d;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[k] = -x;
            nodes[n - 1 - k] = x;
            weights[k] = w;
            weights[n - 1 - k] = w;
        }
        Self { nodes, weights }
    }

    /// Integrates `f` over [a, b].
    pub fn integrate(&self, a: f64, b: f64, mut f: impl FnMut(f64) -> f64) -> f64 {
        let half = (b - a) / 2.0;
        let mid = (a + b) / 2.0;
        let mut sum = 0.0;
        for (&x, &w) in self.nodes.iter().zip(&self.weights) {
            sum += w * f(mid + half * x);
        }
        sum * half
    }

    /// Mapped nodes and scaled weights on [a, b].
    pub fn mapped(&self, a: f64, b: f64) -> (Vec<f64>, Vec<f64>) {
        let half = (b - a) / 2.0;
        let mid = (a + b) / 2.0;
        let nodes = self.nodes.iter().map(|&x| mid + half * x).collect();
        let weights = self.weights.iter().map(|&w| w * half).collect();
        (nodes, weights)
    }
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Result of a Monte Carlo estimate.
#[derive(Debug, Clone, Copy)]
pub struct McEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub samples: u64,
}

#[derive(Debug, Clone, Copy, Default)]
struct Welford {
    count: u64,
    mean: f64,
    m2: f64,
}

impl Welford {
    fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    fn merge(a: Welford, b: Welford) -> Welford {
        if a.count == 0 {
            return b;
        }
        if b.count == 0 {
            return a;
        }
        let count = a.count + b.count;
        let delta = b.mean - a.mean;
        let mean = a.mean + delta * (b.count as f64 / count as f64);
        let m2 = a.m2 + b.m2 + delta * delta * (a.count as f64 * b.count as f64 / count as f64);
        Welford { count, mean, m2 }
    }
}

/// Derives a per-chunk RNG from a master seed (SplitMix-style stride).
pub fn chunk_rng(seed: u64, chunk: u64) -> StdRng {
    StdRng::seed_from_u64(seed.wrapping_add(chunk.wrapping_mul(0x9E37_79B9_7F4A_7C15)))
}

/// Plain Monte Carlo mean of `f` with Welford variance tracking.
///
/// Sampling is split into fixed-size chunks with per-chunk derived seeds and
/// the chunk statistics are merged by a pairwise tree, so the result does not
/// depend on how chunks would be scheduled across threads.
pub fn mc_mean(samples: u64, seed: u64, mut f: impl FnMut(&mut StdRng) -> f64) -> McEstimate {
    const CHUNK: u64 = 1 << 16;
    let n_chunks = samples.div_ceil(CHUNK);
    let mut stats = Vec::with_capacity(n_chunks as usize);
    let mut remaining = samples;
    for c in 0..n_chunks {
        let mut rng = chunk_rng(seed, c);
        let take = remaining.min(CHUNK);
        remaining -= take;
        let mut w = Welford::default();
        for _ in 0..take {
            w.push(f(&mut rng));
        }
        stats.push(w);
    }
    // pairwise tree reduction
    while stats.len() > 1 {
        let mut next = Vec::with_capacity(stats.len().div_ceil(2));
        for pair in stats.chunks(2) {
            next.push(if pair.len() == 2 {
                Welford::merge(pair[0], pair[1])
            } else {
                pair[0]
            });
        }
        stats = next;
    }
    let w = stats[0];
    let variance = if w.count > 1 { w.m2 / (w.count as f64 - 1.0) } else { 0.0 };
    McEstimate {
        mean: w.mean,
        std_error: (variance / w.count as f64).sqrt(),
        samples: w.count,
    }
}
