//! Reproducible randomness: SplitMix64 plus the sampling primitives the
//! Monte Carlo pipeline needs.
//!
//! SplitMix64 (Steele, Lea & Flood; the JDK `SplittableRandom` generator) is a
//! counter-based 64-bit generator: the state advances by a fixed odd constant
//! and the output is an avalanche mix of the counter. Streams for independent
//! work items are derived by folding tag words through the same mixing
//! function, so results never depend on execution order. Seeds are always
//! explicit; nothing in this module reads clocks or the environment.

/// Output mixing function of SplitMix64.
#[inline]
fn mix64(mut z: u64) -> u64 {
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const GOLDEN_GAMMA: u64 = 0x9E37_79B9_7F4A_7C15;

/// Derive an independent stream seed from a master seed and a tag tuple.
///
/// Folds each tag through the SplitMix64 finalizer; the same tuple always
/// yields the same stream, and distinct tuples yield (avalanche-)independent
/// ones.
pub fn derive_stream(seed: u64, tags: &[u64]) -> u64 {
    let mut h = mix64(seed ^ GOLDEN_GAMMA);
    for &t in tags {
        h = mix64(h ^ t.wrapping_add(GOLDEN_GAMMA));
    }
    h
}

/// SplitMix64 generator.
#[derive(Clone, Debug)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    #[inline]
    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(GOLDEN_GAMMA);
        mix64(self.state)
    }

    /// Uniform double in [0, 1) with 53 random bits.
    #[inline]
    pub fn next_f64(&mut self) -> f64 {
        (self.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64)
    }

    /// Unbiased uniform draw from `0..n` by rejection on the modulus.
    pub fn next_below(&mut self, n: u64) -> u64 {
        assert!(n > 0, "next_below requires n > 0");
        let threshold = n.wrapping_neg() % n; // 2^64 mod n
        loop {
            let x = self.next_u64();
            if x >= threshold {
                return x % n;
            }
        }
    }
}

/// In-place Fisher–Yates shuffle driven by the given generator.
pub fn fisher_yates<T>(rng: &mut SplitMix64, items: &mut [T]) {
    for i in (1..items.len()).rev() {
        let j = rng.next_below(i as u64 + 1) as usize;
        items.swap(i, j);
    }
}

/// One binomial draw `Binomial(n, p)` by CDF inversion.
///
/// Draws are split into chunks of at most 512 trials (binomials add across
/// disjoint trial blocks) and the complement is used for p > 1/2, keeping the
/// starting pmf `(1−p)^m ≥ 2^-512` well inside normal f64 range. Cost is
/// O(n·min(p,1−p)) flops, which at this crate's shot counts is microseconds.
pub fn binomial(rng: &mut SplitMix64, n: u64, p: f64) -> u64 {
    assert!((0.0..=1.0).contains(&p), "binomial p out of range: {p}");
    if n == 0 || p == 0.0 {
        return 0;
    }
    if p == 1.0 {
        return n;
    }
    if p > 0.5 {
        return n - binomial(rng, n, 1.0 - p);
    }
    const CHUNK: u64 = 512;
    let mut total = 0u64;
    let mut remaining = n;
    while remaining > 0 {
        let m = remaining.min(CHUNK);
        total += binomial_small(rng, m, p);
        remaining -= m;
    }
    total
}

/// Inversion for n ≤ 512, p ≤ 1/2.
fn binomial_small(rng: &mut SplitMix64, n: u64, p: f64) -> u64 {
    let r = p / (1.0 - p);
    let mut f = (1.0 - p).powi(n as i32);
    let mut k = 0u64;
    let mut u = rng.next_f64();
    while u >= f && k < n {
        u -= f;
        k += 1;
        f *= r * ((n - k + 1) as f64) / (k as f64);
    }
    k
}

/// One multinomial draw of size `n` over `probs` by sequential binomial
/// conditioning. `probs` must be non-negative and sum to 1 within 1e-9.
pub fn multinomial(rng: &mut SplitMix64, n: u64, probs: &[f64]) -> Vec<u64> {
    assert!(!probs.is_empty());
    let sum: f64 = probs.iter().sum();
    assert!(
        (sum - 1.0).abs() < 1e-9,
        "multinomial probabilities sum to {sum}, expected 1"
    );
    let mut out = Vec::with_capacity(probs.len());
    let mut remaining_n = n;
    let mut remaining_p = 1.0f64;
    for &p in &probs[..probs.len() - 1] {
        assert!(p >= -1e-12, "negative probability {p}");
        let cond = if remaining_p <= 0.0 {
            0.0
        } else {
            (p / remaining_p).clamp(0.0, 1.0)
        };
        let draw = binomial(rng, remaining_n, cond);
        out.push(draw);
        remaining_n -= draw;
        remaining_p -= p;
    }
    out.push(remaining_n);
    out
}
