//! Segmented sieving for ω(n), Ω(n), π(x) and exact prefix sums.
//!
//! The factoring sieve marks every prime p ≤ √(hi−1) across a block, divides
//! full prime powers out of a residual copy of each integer, and counts a
//! leftover cofactor > 1 as one extra prime factor. Prefix sums are carried
//! in 128-bit accumulators so overflow is impossible at any reachable x.

use crate::{Error, Result};

/// Sieve/scan segment length in integers. Cache-friendly and amortizes the
/// prime-list traversal.
pub const DEFAULT_SEGMENT_SIZE: u64 = 1 << 20;

/// Largest `limit` accepted by [`primes_up_to`]; the bit sieve plus the prime
/// list stay within a few hundred MB up to here.
pub const MAX_TABLE_LIMIT: u64 = 1 << 31;

/// Primes in `[2, limit]`, ascending, with π(x) answered by binary search
/// (optionally accelerated by a sampled cumulative-count index).
#[derive(Debug, Clone)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
    count_index: Option<CountIndex>,
}

/// Sampled π values every `1 << GRAIN_LOG2` integers; narrows the binary
/// search window for π-heavy workloads like the hyperbola evaluation.
#[derive(Debug, Clone)]
struct CountIndex {
    grain_log2: u32,
    counts: Vec<u64>,
}

const COUNT_INDEX_GRAIN_LOG2: u32 = 16;

impl PrimeTable {
    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    /// π(x): the exact number of primes ≤ x. Errors when x exceeds the
    /// table's coverage.
    pub fn prime_count(&self, x: u64) -> Result<u64> {
        if x > self.limit {
            return Err(Error::InsufficientTable { limit: self.limit, needed: x });
        }
        let (lo, hi) = match &self.count_index {
            Some(idx) => {
                let bucket = (x >> idx.grain_log2) as usize;
                let lo = idx.counts[bucket] as usize;
                let hi = idx.counts.get(bucket + 1).map_or(self.primes.len(), |&c| c as usize);
                (lo, hi)
            }
            None => (0, self.primes.len()),
        };
        let c = self.primes[lo..hi].partition_point(|&p| p <= x);
        Ok((lo + c) as u64)
    }

    /// Attach the sampled count index.
    pub fn with_count_index(mut self) -> Self {
        let grain_log2 = COUNT_INDEX_GRAIN_LOG2;
        let buckets = (self.limit >> grain_log2) as usize + 1;
        let mut counts = Vec::with_capacity(buckets);
        let mut i = 0usize;
        for b in 0..buckets {
            let lo = (b as u64) << grain_log2;
            while i < self.primes.len() && self.primes[i] < lo {
                i += 1;
            }
            counts.push(i as u64);
        }
        self.count_index = Some(CountIndex { grain_log2, counts });
        self
    }
}

/// Sieve of Eratosthenes over the odd integers in `[2, limit]`.
pub fn primes_up_to(limit: u64) -> Result<PrimeTable> {
    if limit < 2 {
        return Err(Error::LimitTooSmall(limit));
    }
    if limit > MAX_TABLE_LIMIT {
        return Err(Error::LimitExceedsBudget { requested: limit, max: MAX_TABLE_LIMIT });
    }
    // Bit i represents the odd number 2i + 1; index 0 (the unit 1) stays dead.
    let n_odd = ((limit - 1) / 2 + 1) as usize;
    let mut composite = vec![0u64; n_odd / 64 + 1];
    composite[0] |= 1; // 1 is not prime
    let mut d = 3u64;
    while d * d <= limit {
        let idx = ((d - 1) / 2) as usize;
        if composite[idx / 64] & (1 << (idx % 64)) == 0 {
            let mut m = d * d;
            while m <= limit {
                let j = ((m - 1) / 2) as usize;
                composite[j / 64] |= 1 << (j % 64);
                m += 2 * d;
            }
        }
        d += 2;
    }
    let mut primes = Vec::with_capacity(prime_count_estimate(limit));
    primes.push(2);
    let mut n = 3u64;
    while n <= limit {
        let j = ((n - 1) / 2) as usize;
        if composite[j / 64] & (1 << (j % 64)) == 0 {
            primes.push(n);
        }
        n += 2;
    }
    if limit < 3 {
        // limit == 2
        primes.truncate(1);
    }
    Ok(PrimeTable { limit, primes, count_index: None })
}

fn prime_count_estimate(limit: u64) -> usize {
    if limit < 10 {
        return 8;
    }
    let x = limit as f64;
    (1.2 * x / x.ln()) as usize + 16
}

/// Apply `f` to every prime ≤ `limit`, generating them segment by segment.
/// Memory stays O(√limit); used for prime sums far past table budgets.
pub fn for_each_prime(limit: u64, mut f: impl FnMut(u64)) -> Result<()> {
    if limit < 2 {
        return Ok(());
    }
    let root = isqrt(limit);
    let base = primes_up_to(root.max(2))?;
    for &p in base.primes() {
        if p <= limit {
            f(p);
        }
    }
    let seg = DEFAULT_SEGMENT_SIZE;
    let mut lo = root + 1;
    let mut composite = vec![false; seg as usize];
    while lo <= limit {
        let hi = (lo + seg - 1).min(limit);
        let len = (hi - lo + 1) as usize;
        composite[..len].fill(false);
        for &p in base.primes() {
            let mut m = lo.div_ceil(p) * p;
            while m <= hi {
                composite[(m - lo) as usize] = true;
                m += p;
            }
        }
        for (i, &c) in composite[..len].iter().enumerate() {
            if !c {
                f(lo + i as u64);
            }
        }
        lo = hi + 1;
    }
    Ok(())
}

/// Per-integer ω and Ω on the half-open range `[lo, hi)`.
#[derive(Debug, Clone)]
pub struct OmegaBlock {
    pub lo: u64,
    pub hi: u64,
    pub omega: Vec<u8>,
    pub big_omega: Vec<u8>,
}

impl OmegaBlock {
    pub fn len(&self) -> usize {
        (self.hi - self.lo) as usize
    }

    pub fn is_empty(&self) -> bool {
        self.lo == self.hi
    }

    /// (ω(n), Ω(n)) for n inside the block.
    pub fn at(&self, n: u64) -> Option<(u8, u8)> {
        if n < self.lo || n >= self.hi {
            return None;
        }
        let i = (n - self.lo) as usize;
        Some((self.omega[i], self.big_omega[i]))
    }
}

/// Factor-count sieve over `[lo, hi)`. The table must cover √(hi−1).
pub fn omega_block(lo: u64, hi: u64, table: &PrimeTable) -> Result<OmegaBlock> {
    if lo == 0 {
        return Err(Error::domain("lo", "range must start at 1 or above"));
    }
    if lo >= hi {
        return Err(Error::domain("hi", format!("empty range [{lo}, {hi})")));
    }
    let root = isqrt(hi - 1);
    if table.limit() < root {
        return Err(Error::InsufficientTable { limit: table.limit(), needed: root });
    }
    let len = (hi - lo) as usize;
    let mut omega = vec![0u8; len];
    let mut big_omega = vec![0u8; len];
    let mut residual: Vec<u64> = (lo..hi).collect();
    for &p in table.primes() {
        if p > root {
            break;
        }
        let mut m = lo.div_ceil(p) * p;
        while m < hi {
            let i = (m - lo) as usize;
            omega[i] += 1;
            let mut e = 0u8;
            while residual[i] % p == 0 {
                residual[i] /= p;
                e += 1;
            }
            big_omega[i] += e;
            m += p;
        }
    }
    // A residual above 1 is a single prime factor larger than √(hi−1).
    for i in 0..len {
        if residual[i] > 1 {
            omega[i] += 1;
            big_omega[i] += 1;
        }
    }
    Ok(OmegaBlock { lo, hi, omega, big_omega })
}

/// Exact trial-division factor counts (ω(n), Ω(n)); the independent oracle
/// for the sieve.
pub fn factor_count_naive(n: u64) -> Result<(u32, u32)> {
    if n == 0 {
        return Err(Error::domain("n", "0 has no factorization"));
    }
    let mut m = n;
    let mut omega = 0u32;
    let mut big = 0u32;
    let mut d = 2u64;
    while d * d <= m {
        if m % d == 0 {
            omega += 1;
            while m % d == 0 {
                m /= d;
                big += 1;
            }
        }
        d += if d == 2 { 1 } else { 2 };
    }
    if m > 1 {
        omega += 1;
        big += 1;
    }
    Ok((omega, big))
}

/// Running exact sums S_ω(n) and S_Ω(n).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PrefixState {
    pub n: u64,
    pub sum_omega: u128,
    pub sum_big_omega: u128,
}

impl PrefixState {
    pub fn start() -> Self {
        // n = 1 contributes (0, 0): the empty product has no prime factors.
        PrefixState { n: 1, sum_omega: 0, sum_big_omega: 0 }
    }
}

/// 𝒥(n) = S_Ω(n) − S_ω(n).
pub fn j_diff(state: &PrefixState) -> u128 {
    state.sum_big_omega - state.sum_omega
}

/// How often [`prefix_scan`] reports to its sink.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stream {
    EveryInteger,
    SegmentBoundary,
}

/// Scan 1..=x accumulating exact prefix sums, reporting states to `sink`, and
/// returning the final state. The result is independent of `segment_size`.
pub fn prefix_scan(
    x: u64,
    segment_size: u64,
    stream: Stream,
    mut sink: impl FnMut(&PrefixState),
) -> Result<PrefixState> {
    if x == 0 {
        return Err(Error::domain("x", "scan range is empty"));
    }
    let seg = segment_size.max(1);
    let mut state = PrefixState::start();
    if stream == Stream::EveryInteger {
        sink(&state);
    }
    if x == 1 {
        sink(&state);
        return Ok(state);
    }
    let table = primes_up_to(isqrt(x).max(2))?;
    let mut lo = 2u64;
    while lo <= x {
        let hi = (lo + seg).min(x + 1);
        let block = omega_block(lo, hi, &table)?;
        for i in 0..block.len() {
            state.n = lo + i as u64;
            state.sum_omega += u128::from(block.omega[i]);
            state.sum_big_omega += u128::from(block.big_omega[i]);
            if stream == Stream::EveryInteger {
                sink(&state);
            }
        }
        if stream == Stream::SegmentBoundary {
            sink(&state);
        }
        lo = hi;
    }
    Ok(state)
}

/// One 40-byte checkpoint record: n (8 bytes), S_ω (16), S_Ω (16), all
/// little-endian.
pub fn write_checkpoint_binary(w: &mut impl std::io::Write, s: &PrefixState) -> Result<()> {
    w.write_all(&s.n.to_le_bytes())?;
    w.write_all(&s.sum_omega.to_le_bytes())?;
    w.write_all(&s.sum_big_omega.to_le_bytes())?;
    Ok(())
}

pub fn read_checkpoints_binary(r: &mut impl std::io::Read) -> Result<Vec<PrefixState>> {
    let mut out = Vec::new();
    let mut rec = [0u8; 40];
    loop {
        match r.read_exact(&mut rec) {
            Ok(()) => {}
            Err(e) if e.kind() == std::io::ErrorKind::UnexpectedEof => break,
            Err(e) => return Err(e.into()),
        }
        out.push(PrefixState {
            n: u64::from_le_bytes(rec[0..8].try_into().unwrap()),
            sum_omega: u128::from_le_bytes(rec[8..24].try_into().unwrap()),
            sum_big_omega: u128::from_le_bytes(rec[24..40].try_into().unwrap()),
        });
    }
    Ok(out)
}

/// JSON-lines form of the same record: `{"n":..,"sum_omega":"..","sum_big_omega":".."}`.
/// Sums are strings so consumers never truncate them to 53 bits.
pub fn write_checkpoint_jsonl(w: &mut impl std::io::Write, s: &PrefixState) -> Result<()> {
    writeln!(
        w,
        "{{\"n\":{},\"sum_omega\":\"{}\",\"sum_big_omega\":\"{}\"}}",
        s.n, s.sum_omega, s.sum_big_omega
    )?;
    Ok(())
}

/// Integer square root: the largest r with r² ≤ n.
pub fn isqrt(n: u64) -> u64 {
    if n == 0 {
        return 0;
    }
    let mut r = (n as f64).sqrt() as u64;
    while r.checked_mul(r).map_or(true, |rr| rr > n) {
        r -= 1;
    }
    while (r + 1).checked_mul(r + 1).is_some_and(|rr| rr <= n) {
        r += 1;
    }
    r
}
