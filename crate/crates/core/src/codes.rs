//! Words, codes and orbits of codes under the isometry group of the mixed
//! binary/ternary Hamming space.
//!
//! The group is never materialized. Two codes of size at most three lie in the
//! same orbit iff, after padding them to ordered triples, the per-column
//! [`Pattern`] counts agree up to a simultaneous reordering of the triple.
//! [`OrbitId`] stores the lexicographically smallest such count vector.

use crate::clique::{max_clique_among, BitSet};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use std::collections::{BTreeSet, HashMap};
use std::fmt;

/// Parameters `(n2, n3, d)` and the hierarchy level `k`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct ProblemSpec {
    pub n2: usize,
    pub n3: usize,
    pub d: usize,
    pub k: u8,
}

impl ProblemSpec {
    pub fn new(n2: usize, n3: usize, d: usize, k: u8) -> Result<Self> {
        if n2 == 0 || n3 == 0 {
            return Err(Error::InvalidSpec(format!(
                "need at least one binary and one ternary coordinate, got n2={n2}, n3={n3}"
            )));
        }
        if d == 0 || d > n2 + n3 {
            return Err(Error::InvalidSpec(format!("distance {d} outside 1..={}", n2 + n3)));
        }
        if k != 2 && k != 3 {
            return Err(Error::InvalidSpec(format!("level k={k} unsupported (use 2 or 3)")));
        }
        // Count vectors are stored as u16.
        if n2 + n3 > u16::MAX as usize {
            return Err(Error::InvalidSpec("length too large".into()));
        }
        Ok(ProblemSpec { n2, n3, d, k })
    }

    /// Shorthand for the level-3 problem.
    pub fn k3(n2: usize, n3: usize, d: usize) -> Result<Self> {
        Self::new(n2, n3, d, 3)
    }

    pub fn length(&self) -> usize {
        self.n2 + self.n3
    }

    /// `2^n2 * 3^n3`, saturating.
    pub fn word_count(&self) -> u128 {
        let mut c: u128 = 1;
        for _ in 0..self.n2 {
            c = c.saturating_mul(2);
        }
        for _ in 0..self.n3 {
            c = c.saturating_mul(3);
        }
        c
    }

    pub fn with_d(&self, d: usize) -> Result<Self> {
        Self::new(self.n2, self.n3, d, self.k)
    }

    pub fn with_k(&self, k: u8) -> Result<Self> {
        Self::new(self.n2, self.n3, self.d, k)
    }
}

impl fmt::Display for ProblemSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{},{}) k={}", self.n2, self.n3, self.d, self.k)
    }
}

/// A word: `n2` binary symbols followed by `n3` ternary symbols, all 0-based.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word {
    bits: Vec<u8>,
    trits: Vec<u8>,
}

impl Word {
    pub fn new(bits: Vec<u8>, trits: Vec<u8>) -> Result<Self> {
        if let Some(b) = bits.iter().find(|&&b| b > 1) {
            return Err(Error::Domain(format!("binary symbol {b} out of range")));
        }
        if let Some(t) = trits.iter().find(|&&t| t > 2) {
            return Err(Error::Domain(format!("ternary symbol {t} out of range")));
        }
        Ok(Word { bits, trits })
    }

    pub fn zero(spec: &ProblemSpec) -> Self {
        Word { bits: vec![0; spec.n2], trits: vec![0; spec.n3] }
    }

    /// Mixed-radix decoding; coordinate 0 is the most significant digit.
    pub fn from_index(spec: &ProblemSpec, mut idx: usize) -> Self {
        let mut trits = vec![0u8; spec.n3];
        for t in trits.iter_mut().rev() {
            *t = (idx % 3) as u8;
            idx /= 3;
        }
        let mut bits = vec![0u8; spec.n2];
        for b in bits.iter_mut().rev() {
            *b = (idx % 2) as u8;
            idx /= 2;
        }
        Word { bits, trits }
    }

    /// Inverse of [`Word::from_index`].
    pub fn index(&self) -> usize {
        let mut idx = 0usize;
        for &b in &self.bits {
            idx = idx * 2 + b as usize;
        }
        for &t in &self.trits {
            idx = idx * 3 + t as usize;
        }
        idx
    }

    pub fn bits(&self) -> &[u8] {
        &self.bits
    }

    pub fn trits(&self) -> &[u8] {
        &self.trits
    }

    pub fn conforms(&self, spec: &ProblemSpec) -> bool {
        self.bits.len() == spec.n2 && self.trits.len() == spec.n3
    }

    /// Hamming distance to the all-zero word, split as (binary, ternary).
    pub fn split_weight(&self) -> (usize, usize) {
        (self.bits.iter().filter(|&&b| b != 0).count(), self.trits.iter().filter(|&&t| t != 0).count())
    }

    pub fn weight(&self) -> usize {
        let (a, b) = self.split_weight();
        a + b
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in &self.bits {
            write!(f, "{b}")?;
        }
        write!(f, "|")?;
        for t in &self.trits {
            write!(f, "{t}")?;
        }
        Ok(())
    }
}

/// Iterate over every word of the space in index order.
pub fn all_words(spec: &ProblemSpec) -> impl Iterator<Item = Word> + '_ {
    let n = spec.word_count() as usize;
    (0..n).map(move |i| Word::from_index(spec, i))
}

pub fn hamming_distance(v: &Word, w: &Word) -> Result<usize> {
    if v.bits.len() != w.bits.len() || v.trits.len() != w.trits.len() {
        return Err(Error::Shape(format!(
            "words of shape ({},{}) and ({},{})",
            v.bits.len(),
            v.trits.len(),
            w.bits.len(),
            w.trits.len()
        )));
    }
    let db = v.bits.iter().zip(&w.bits).filter(|(a, b)| a != b).count();
    let dt = v.trits.iter().zip(&w.trits).filter(|(a, b)| a != b).count();
    Ok(db + dt)
}

/// A set of at most three distinct words, kept sorted.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Code {
    words: Vec<Word>,
}

impl Code {
    pub fn new(mut words: Vec<Word>) -> Result<Self> {
        words.sort();
        words.dedup();
        if words.len() > 3 {
            return Err(Error::CodeSize(words.len()));
        }
        if let Some(first) = words.first() {
            if words.iter().any(|w| w.bits.len() != first.bits.len() || w.trits.len() != first.trits.len()) {
                return Err(Error::Shape("words of different shapes in one code".into()));
            }
        }
        Ok(Code { words })
    }

    pub fn empty() -> Self {
        Code { words: Vec::new() }
    }

    pub fn words(&self) -> &[Word] {
        &self.words
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }
}

/// Minimum pairwise distance; `None` for codes with fewer than two words.
pub fn min_distance(words: &[Word]) -> Option<usize> {
    let mut best: Option<usize> = None;
    for (i, v) in words.iter().enumerate() {
        for w in &words[i + 1..] {
            let d = hamming_distance(v, w).ok()?;
            best = Some(best.map_or(d, |b| b.min(d)));
        }
    }
    best
}

/// Partition of the three positions of a column of a stacked word triple.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Pattern {
    /// `{123}`: all three symbols agree.
    All,
    /// `{12|3}`
    P12_3,
    /// `{13|2}`
    P13_2,
    /// `{1|23}`
    P1_23,
    /// `{1|2|3}`: ternary columns only.
    Distinct,
}

impl Pattern {
    pub const BINARY: [Pattern; 4] = [Pattern::All, Pattern::P12_3, Pattern::P13_2, Pattern::P1_23];
    pub const TERNARY: [Pattern; 5] = [Pattern::All, Pattern::P12_3, Pattern::P13_2, Pattern::P1_23, Pattern::Distinct];

    pub fn of(a: u8, b: u8, c: u8) -> Pattern {
        match (a == b, a == c, b == c) {
            (true, true, _) => Pattern::All,
            (true, false, _) => Pattern::P12_3,
            (false, true, _) => Pattern::P13_2,
            (false, false, true) => Pattern::P1_23,
            (false, false, false) => Pattern::Distinct,
        }
    }

    pub fn index(self) -> usize {
        self as usize
    }

    /// A triple of labels realizing this pattern.
    pub fn labels(self) -> [u8; 3] {
        match self {
            Pattern::All => [0, 0, 0],
            Pattern::P12_3 => [0, 0, 1],
            Pattern::P13_2 => [0, 1, 0],
            Pattern::P1_23 => [0, 1, 1],
            Pattern::Distinct => [0, 1, 2],
        }
    }

    /// Pattern of the reordered triple `(t[perm[0]], t[perm[1]], t[perm[2]])`.
    pub fn permuted(self, perm: [usize; 3]) -> Pattern {
        let l = self.labels();
        Pattern::of(l[perm[0]], l[perm[1]], l[perm[2]])
    }

    /// Whether positions `a` and `b` (0-based) carry different symbols.
    pub fn separates(self, a: usize, b: usize) -> bool {
        let l = self.labels();
        l[a] != l[b]
    }
}

pub(crate) const TRIPLE_PERMS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];

/// Canonical invariant of an orbit of codes of size at most three.
///
/// `bin` and `ter` count columns by [`Pattern`] (in [`Pattern::BINARY`] and
/// [`Pattern::TERNARY`] order). The empty code has size 0 and zero counts.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OrbitId {
    pub size: u8,
    pub bin: [u16; 4],
    pub ter: [u16; 5],
}

fn permute_counts<const N: usize>(counts: &[u16; N], perm: [usize; 3]) -> [u16; N] {
    let mut out = [0u16; N];
    for (i, &c) in counts.iter().enumerate() {
        out[Pattern::TERNARY[i].permuted(perm).index()] += c;
    }
    out
}

fn pair_distances_of(bin: &[u16; 4], ter: &[u16; 5]) -> [usize; 3] {
    let mut out = [0usize; 3];
    for (slot, (a, b)) in [(0, 1), (0, 2), (1, 2)].into_iter().enumerate() {
        out[slot] = Pattern::BINARY
            .iter()
            .zip(bin)
            .chain(Pattern::TERNARY.iter().zip(ter))
            .filter(|(p, _)| p.separates(a, b))
            .map(|(_, &c)| c as usize)
            .sum();
    }
    out
}

impl OrbitId {
    pub const EMPTY: OrbitId = OrbitId { size: 0, bin: [0; 4], ter: [0; 5] };

    /// Canonicalize the column-pattern counts of some ordered triple (repeats allowed).
    pub fn from_counts(bin: [u16; 4], ter: [u16; 5]) -> OrbitId {
        let mut best: Option<([u16; 4], [u16; 5])> = None;
        for perm in TRIPLE_PERMS {
            let cand = (permute_counts(&bin, perm), permute_counts(&ter, perm));
            if best.as_ref().is_none_or(|b| cand < *b) {
                best = Some(cand);
            }
        }
        let (bin, ter) = best.unwrap();
        let zeros = pair_distances_of(&bin, &ter).iter().filter(|&&d| d == 0).count();
        let size = match zeros {
            0 => 3,
            1 => 2,
            _ => 1,
        };
        OrbitId { size, bin, ter }
    }

    pub fn singleton(n2: usize, n3: usize) -> OrbitId {
        let mut bin = [0; 4];
        let mut ter = [0; 5];
        bin[0] = n2 as u16;
        ter[0] = n3 as u16;
        OrbitId::from_counts(bin, ter)
    }

    /// Orbit of a pair at binary distance `a` and ternary distance `b`; `(0,0)` gives the singleton.
    pub fn pair(n2: usize, n3: usize, a: usize, b: usize) -> OrbitId {
        let mut bin = [0; 4];
        let mut ter = [0; 5];
        bin[Pattern::All.index()] = (n2 - a) as u16;
        bin[Pattern::P1_23.index()] = a as u16;
        ter[Pattern::All.index()] = (n3 - b) as u16;
        ter[Pattern::P1_23.index()] = b as u16;
        OrbitId::from_counts(bin, ter)
    }

    /// For a pair orbit, its `(binary, ternary)` distance profile.
    pub fn pair_profile(&self) -> Option<(usize, usize)> {
        if self.size != 2 {
            return None;
        }
        let n2: usize = self.bin.iter().map(|&c| c as usize).sum();
        let n3: usize = self.ter.iter().map(|&c| c as usize).sum();
        Some((n2 - self.bin[0] as usize, n3 - self.ter[0] as usize))
    }

    /// Distances between positions (1,2), (1,3), (2,3) of the canonical triple.
    pub fn triple_distances(&self) -> [usize; 3] {
        pair_distances_of(&self.bin, &self.ter)
    }

    /// Smallest distance between distinct underlying words.
    pub fn min_distance(&self) -> Option<usize> {
        if self.size < 2 {
            return None;
        }
        self.triple_distances().into_iter().filter(|&d| d > 0).min()
    }

    pub fn is_feasible(&self, d: usize) -> bool {
        self.min_distance().is_none_or(|m| m >= d)
    }

    /// Number of codes in the orbit, for a space with the given block lengths.
    pub fn orbit_size(&self) -> u128 {
        if self.size == 0 {
            return 1;
        }
        // Ordered triples realizing a count vector, then divide by the number
        // of ordered triples per code (1 for singletons, 6 otherwise).
        let mut seen = BTreeSet::new();
        let mut triples: u128 = 0;
        for perm in TRIPLE_PERMS {
            let key = (permute_counts(&self.bin, perm), permute_counts(&self.ter, perm));
            if !seen.insert(key) {
                continue;
            }
            triples += realizations(&key.0, 2) * realizations(&key.1, 3);
        }
        if self.size == 1 {
            triples
        } else {
            triples / 6
        }
    }
}

/// Number of symbol columns over `q` letters realizing each pattern, times the
/// multinomial coefficient placing the patterns on the coordinates.
fn realizations<const N: usize>(counts: &[u16; N], q: u128) -> u128 {
    let per_column = |p: Pattern| -> u128 {
        match p {
            Pattern::All => q,
            Pattern::Distinct => q * (q - 1) * (q - 2),
            _ => q * (q - 1),
        }
    };
    let total: u64 = counts.iter().map(|&c| c as u64).sum();
    let mut ways = multinomial(total, counts.iter().map(|&c| c as u64));
    for (i, &c) in counts.iter().enumerate() {
        ways *= per_column(Pattern::TERNARY[i]).pow(c as u32);
    }
    ways
}

pub(crate) fn multinomial(total: u64, parts: impl Iterator<Item = u64>) -> u128 {
    let mut acc: u128 = 1;
    let mut rest = total;
    for p in parts {
        acc *= binomial(rest, p);
        rest -= p;
    }
    acc
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
    }
    acc
}

impl fmt::Display for OrbitId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.size == 0 {
            return write!(f, "empty");
        }
        write!(
            f,
            "size{} bin[{},{},{},{}] ter[{},{},{},{},{}]",
            self.size,
            self.bin[0],
            self.bin[1],
            self.bin[2],
            self.bin[3],
            self.ter[0],
            self.ter[1],
            self.ter[2],
            self.ter[3],
            self.ter[4]
        )
    }
}

/// Orbit of a code, computed from its padded ordered triple.
pub fn canonical_orbit(code: &Code) -> Result<OrbitId> {
    let w = code.words();
    let triple: [&Word; 3] = match w.len() {
        0 => return Ok(OrbitId::EMPTY),
        1 => [&w[0], &w[0], &w[0]],
        2 => [&w[0], &w[1], &w[1]],
        3 => [&w[0], &w[1], &w[2]],
        n => return Err(Error::CodeSize(n)),
    };
    Ok(orbit_of_triple(triple))
}

/// Orbit of the set underlying an ordered triple of words (repeats allowed).
pub fn orbit_of_triple(t: [&Word; 3]) -> OrbitId {
    let mut bin = [0u16; 4];
    let mut ter = [0u16; 5];
    for i in 0..t[0].bits.len() {
        bin[Pattern::of(t[0].bits[i], t[1].bits[i], t[2].bits[i]).index()] += 1;
    }
    for i in 0..t[0].trits.len() {
        ter[Pattern::of(t[0].trits[i], t[1].trits[i], t[2].trits[i]).index()] += 1;
    }
    OrbitId::from_counts(bin, ter)
}

pub fn orbit_pair_distances(w: &OrbitId) -> Result<[usize; 3]> {
    if w.size < 2 {
        return Err(Error::Domain(format!("orbit {w} has fewer than two words")));
    }
    Ok(w.triple_distances())
}

/// One entry of an [`OrbitTable`].
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct OrbitInfo {
    pub id: OrbitId,
    pub feasible: bool,
}

/// All orbits of codes of size 0..=3, with stable indices. Index 0 is the empty code.
#[derive(Clone, Debug)]
pub struct OrbitTable {
    spec: ProblemSpec,
    orbits: Vec<OrbitInfo>,
    index: HashMap<OrbitId, usize>,
}

impl OrbitTable {
    pub fn spec(&self) -> &ProblemSpec {
        &self.spec
    }

    pub fn orbits(&self) -> &[OrbitInfo] {
        &self.orbits
    }

    pub fn len(&self) -> usize {
        self.orbits.len()
    }

    pub fn is_empty(&self) -> bool {
        self.orbits.is_empty()
    }

    pub fn lookup(&self, id: &OrbitId) -> Option<usize> {
        self.index.get(id).copied()
    }

    pub fn get(&self, idx: usize) -> &OrbitInfo {
        &self.orbits[idx]
    }

    pub fn singleton_index(&self) -> usize {
        self.index[&OrbitId::singleton(self.spec.n2, self.spec.n3)]
    }
}

fn compositions<const N: usize>(total: usize) -> Vec<[u16; N]> {
    fn rec<const N: usize>(pos: usize, left: usize, cur: &mut [u16; N], out: &mut Vec<[u16; N]>) {
        if pos == N - 1 {
            cur[pos] = left as u16;
            out.push(*cur);
            return;
        }
        for v in 0..=left {
            cur[pos] = v as u16;
            rec(pos + 1, left - v, cur, out);
        }
    }
    let mut out = Vec::new();
    rec(0, total, &mut [0u16; N], &mut out);
    out
}

/// Every orbit of codes of size at most three, generated from count vectors.
pub fn enumerate_orbits(spec: &ProblemSpec) -> OrbitTable {
    let mut set = BTreeSet::new();
    let bins = compositions::<4>(spec.n2);
    let ters = compositions::<5>(spec.n3);
    for b in &bins {
        for t in &ters {
            set.insert(OrbitId::from_counts(*b, *t));
        }
    }
    let mut ids: Vec<OrbitId> = set.into_iter().collect();
    ids.sort_by_key(|w| (w.size, *w));
    let mut orbits = vec![OrbitInfo { id: OrbitId::EMPTY, feasible: true }];
    orbits.extend(ids.into_iter().map(|id| OrbitInfo { id, feasible: id.is_feasible(spec.d) }));
    let index = orbits.iter().enumerate().map(|(i, o)| (o.id, i)).collect();
    OrbitTable { spec: *spec, orbits, index }
}

/// Default cap on the number of words for the exact oracle.
pub const DEFAULT_WORD_CAP: u128 = 1000;

/// Orbit of `x` under the isometries fixing both the zero word and the word
/// `w = 1^a 0^(n2-a) | 1^b 0^(n3-b)`: coordinates may be permuted within the
/// four groups cut out by `w`, and symbols 1 and 2 swapped where `w` has a
/// ternary 0. The orbit is determined by symbol counts per group.
fn pair_stabilizer_key(x: &Word, a: usize, b: usize) -> [usize; 5] {
    let (bits, trits) = (x.bits(), x.trits());
    [
        bits[..a].iter().filter(|&&v| v == 1).count(),
        bits[a..].iter().filter(|&&v| v == 1).count(),
        trits[..b].iter().filter(|&&v| v == 0).count(),
        trits[..b].iter().filter(|&&v| v == 1).count(),
        trits[b..].iter().filter(|&&v| v != 0).count(),
    ]
}

/// A maximum code with minimum distance at least `d`, by exact clique search.
///
/// Symmetry is broken twice. Give each pair of words the type
/// (distance, binary part of the distance) and pick, in an optimal code, a pair
/// of least type. An isometry moves it to the zero word and a fixed word `w`
/// of that type, and every other pair in the code has type at least as large.
/// Among the remaining words pick one, `u`, of least orbit under the
/// stabilizer of `(0, w)`; a stabilizer element moves it to a fixed
/// representative, and the other words lie in orbits no smaller.
pub fn max_code(spec: &ProblemSpec, cap: u128) -> Result<Vec<Word>> {
    let n = spec.word_count();
    if n > cap {
        return Err(Error::Resource(format!("{n} words exceed the oracle cap of {cap}")));
    }
    let words: Vec<Word> = all_words(spec).collect();
    let n = words.len();
    if n == 1 {
        return Ok(words);
    }
    let pair_type = |i: usize, j: usize| {
        let b = words[i].bits().iter().zip(words[j].bits()).filter(|(x, y)| x != y).count();
        let t = words[i].trits().iter().zip(words[j].trits()).filter(|(x, y)| x != y).count();
        (b + t, b)
    };
    let types: Vec<Vec<(usize, usize)>> = (0..n).map(|i| (0..n).map(|j| pair_type(i, j)).collect()).collect();
    let zero = 0;
    let mut best = vec![zero];
    for delta in spec.d..=spec.length() {
        for a in delta.saturating_sub(spec.n3)..=delta.min(spec.n2) {
            let b = delta - a;
            let adj: Vec<BitSet> = (0..n)
                .map(|i| {
                    let mut row = BitSet::new(n);
                    (0..n).filter(|&j| j != i && types[i][j] >= (delta, a)).for_each(|j| row.insert(j));
                    row
                })
                .collect();
            let w_bits = (0..spec.n2).map(|i| u8::from(i < a)).collect();
            let w_trits = (0..spec.n3).map(|i| u8::from(i < b)).collect();
            let w = Word::new(w_bits, w_trits)?.index();
            if best.len() < 2 {
                best = vec![zero, w];
            }
            let base = adj[zero].intersect(&adj[w]);
            let keys: Vec<[usize; 5]> = words.iter().map(|x| pair_stabilizer_key(x, a, b)).collect();
            let mut reps: Vec<([usize; 5], usize)> = base.iter().map(|x| (keys[x], x)).collect();
            reps.sort_unstable();
            reps.dedup_by_key(|r| r.0);
            for (key, u) in reps {
                let mut cands = base.intersect(&adj[u]);
                for x in cands.clone().iter() {
                    if keys[x] < key {
                        cands.remove(x);
                    }
                }
                if best.len() < 3 {
                    best = vec![zero, w, u];
                }
                if let Some(rest) = max_clique_among(&adj, &cands, best.len() - 3) {
                    best = vec![zero, w, u];
                    best.extend(rest);
                }
            }
        }
    }
    best.sort_unstable();
    Ok(best.into_iter().map(|i| words[i].clone()).collect())
}

/// Exact value of the maximum code size, for spaces of at most `DEFAULT_WORD_CAP` words.
pub fn exact_n(spec: &ProblemSpec) -> Result<usize> {
    Ok(max_code(spec, DEFAULT_WORD_CAP)?.len())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(bits: &[u8], trits: &[u8]) -> Word {
        Word::new(bits.to_vec(), trits.to_vec()).unwrap()
    }

    #[test]
    fn distance_examples() {
        let v = w(&[0, 1], &[0, 1, 2]);
        assert_eq!(hamming_distance(&v, &v).unwrap(), 0);
        assert_eq!(hamming_distance(&v, &w(&[0, 0], &[0, 2, 2])).unwrap(), 2);
        assert_eq!(hamming_distance(&v, &w(&[1, 0], &[1, 2, 0])).unwrap(), 5);
        assert!(matches!(hamming_distance(&v, &w(&[0], &[0, 1, 2])), Err(Error::Shape(_))));
    }

    #[test]
    fn min_distance_examples() {
        assert_eq!(min_distance(&[]), None);
        assert_eq!(min_distance(&[w(&[0, 0], &[0])]), None);
        assert_eq!(min_distance(&[w(&[0, 0], &[0]), w(&[0, 1], &[1])]), Some(2));
    }

    #[test]
    fn index_round_trip() {
        let spec = ProblemSpec::k3(2, 2, 1).unwrap();
        for (i, word) in all_words(&spec).enumerate() {
            assert_eq!(word.index(), i);
        }
        assert_eq!(Word::from_index(&spec, 35), w(&[1, 1], &[2, 2]));
    }

    #[test]
    fn spec_validation() {
        assert!(ProblemSpec::new(0, 2, 1, 3).is_err());
        assert!(ProblemSpec::new(2, 2, 5, 3).is_err());
        assert!(ProblemSpec::new(2, 2, 0, 3).is_err());
        assert!(ProblemSpec::new(2, 2, 2, 4).is_err());
        assert!(Word::new(vec![2], vec![0]).is_err());
    }

    #[test]
    fn canonical_examples() {
        let single = canonical_orbit(&Code::new(vec![w(&[0, 1], &[2])]).unwrap()).unwrap();
        assert_eq!(single.bin, [2, 0, 0, 0]);
        assert_eq!(single.ter, [1, 0, 0, 0, 0]);
        assert_eq!(single.size, 1);

        let pair = canonical_orbit(&Code::new(vec![w(&[0], &[0]), w(&[1], &[1])]).unwrap()).unwrap();
        assert_eq!(pair, OrbitId::pair(1, 1, 1, 1));
        assert_eq!(pair.pair_profile(), Some((1, 1)));
        let dists = orbit_pair_distances(&pair).unwrap();
        let mut sorted = dists;
        sorted.sort();
        assert_eq!(sorted, [0, 2, 2]);

        let triple =
            canonical_orbit(&Code::new(vec![w(&[0], &[0, 0, 0]), w(&[0], &[0, 1, 1]), w(&[0], &[0, 2, 2])]).unwrap())
                .unwrap();
        assert_eq!(triple.size, 3);
        assert_eq!(triple.bin, [1, 0, 0, 0]);
        assert_eq!(triple.ter[Pattern::All.index()], 1);
        assert_eq!(triple.ter[Pattern::Distinct.index()], 2);
        assert_eq!(orbit_pair_distances(&triple).unwrap(), [2, 2, 2]);
        assert!(orbit_pair_distances(&single).is_err());

        let four = Code::new(vec![w(&[0], &[0]), w(&[0], &[1]), w(&[0], &[2]), w(&[1], &[0])]);
        assert!(matches!(four, Err(Error::CodeSize(4))));
    }

    #[test]
    fn degenerate_counts_detect_pairs() {
        // Only one {12|3} binary column: words 1 and 2 coincide.
        let id = OrbitId::from_counts([0, 1, 0, 0], [1, 0, 0, 0, 0]);
        assert_eq!(id.size, 2);
        assert_eq!(id.min_distance(), Some(1));
    }

    #[test]
    fn enumerate_small() {
        let t = enumerate_orbits(&ProblemSpec::k3(1, 1, 1).unwrap());
        assert_eq!(t.len(), 8);
        assert!(t.orbits().iter().all(|o| o.feasible));
        assert_eq!(t.get(0).id, OrbitId::EMPTY);

        let t2 = enumerate_orbits(&ProblemSpec::k3(1, 1, 2).unwrap());
        assert_eq!(t2.len(), 8);
        let infeasible: Vec<_> = t2.orbits().iter().filter(|o| !o.feasible).map(|o| o.id).collect();
        assert!(infeasible.contains(&OrbitId::pair(1, 1, 1, 0)));
        assert!(infeasible.contains(&OrbitId::pair(1, 1, 0, 1)));
        assert!(!infeasible.contains(&OrbitId::pair(1, 1, 1, 1)));
        // Every triple in a 6-word space of length 2 contains a pair at distance 1.
        assert!(t2.orbits().iter().filter(|o| o.id.size == 3).all(|o| !o.feasible));
    }

    #[test]
    fn orbit_sizes_partition_code_space() {
        let spec = ProblemSpec::k3(2, 1, 1).unwrap();
        let t = enumerate_orbits(&spec);
        let n = spec.word_count();
        let by_size = |s: u8| -> u128 { t.orbits().iter().filter(|o| o.id.size == s).map(|o| o.id.orbit_size()).sum() };
        assert_eq!(by_size(1), n);
        assert_eq!(by_size(2), n * (n - 1) / 2);
        assert_eq!(by_size(3), n * (n - 1) * (n - 2) / 6);
    }

    #[test]
    fn oracle_small_values() {
        assert_eq!(exact_n(&ProblemSpec::k3(2, 1, 1).unwrap()).unwrap(), 12);
        assert_eq!(exact_n(&ProblemSpec::k3(1, 1, 2).unwrap()).unwrap(), 2);
        let big = ProblemSpec::k3(5, 5, 3).unwrap();
        assert!(matches!(exact_n(&big), Err(Error::Resource(_))));
    }
}
