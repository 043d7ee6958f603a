//! p1 design matrices, networks and sufficient statistics.
//!
//! Columns of every design matrix are indexed by `(dyad, configuration)` with
//! dyads `(i, j)`, `i < j`, in lexicographic order and the four
//! configurations of a dyad in the order `(0,0), (1,0), (0,1), (1,1)`.
//! Configuration `(a, b)` of dyad `(i, j)` means `i -> j` iff `a = 1` and
//! `j -> i` iff `b = 1`.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// The four dyad configurations in column order.
pub const CONFIGS: [(u8, u8); 4] = [(0, 0), (1, 0), (0, 1), (1, 1)];

/// Default cap on `n` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_CAP: usize = 5;

/// How reciprocated edges are modelled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReciprocityVariant {
    /// No reciprocal effect.
    Zero,
    /// A single reciprocation parameter shared by all dyads.
    Constant,
    /// Reciprocation `rho + rho_i + rho_j`.
    EdgeDependent,
}

impl ReciprocityVariant {
    pub const ALL: [ReciprocityVariant; 3] = [
        ReciprocityVariant::Zero,
        ReciprocityVariant::Constant,
        ReciprocityVariant::EdgeDependent,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            ReciprocityVariant::Zero => "zero",
            ReciprocityVariant::Constant => "const",
            ReciprocityVariant::EdgeDependent => "edge",
        }
    }
}

impl fmt::Display for ReciprocityVariant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for ReciprocityVariant {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "zero" => Ok(ReciprocityVariant::Zero),
            "const" | "constant" => Ok(ReciprocityVariant::Constant),
            "edge" | "edge-dependent" => Ok(ReciprocityVariant::EdgeDependent),
            other => Err(format!("unknown reciprocity variant `{other}` (expected zero|const|edge)")),
        }
    }
}

/// Number of dyads on `n` nodes.
pub fn num_dyads(n: usize) -> usize {
    n * (n.saturating_sub(1)) / 2
}

/// Dyads `(i, j)` with `i < j` (zero-based) in lexicographic order.
pub fn dyads(n: usize) -> Vec<(usize, usize)> {
    let mut out = Vec::with_capacity(num_dyads(n));
    for i in 0..n {
        for j in i + 1..n {
            out.push((i, j));
        }
    }
    out
}

/// Position of dyad `(i, j)`, `i < j`, in lexicographic order.
pub fn dyad_index(n: usize, i: usize, j: usize) -> usize {
    debug_assert!(i < j && j < n);
    // Dyads before row i: sum_{k<i} (n-1-k).
    i * (2 * n - i - 1) / 2 + (j - i - 1)
}

/// Label of a column in the `p_{i,j}(a,b)` notation, one-based.
pub fn column_label(n: usize, col: usize) -> String {
    let (i, j) = dyads(n)[col / 4];
    let (a, b) = CONFIGS[col % 4];
    format!("p_{{{},{}}}({},{})", i + 1, j + 1, a, b)
}

/// An observed network: one configuration per dyad.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Network {
    n: usize,
    /// Configuration index in `0..4` for each dyad, lexicographic dyad order.
    states: Vec<u8>,
}

/// Text encodings of a network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetworkFormat {
    /// `2n(n-1)` whitespace-separated 0/1 tokens, one 1 per block of four.
    Vector,
    /// `n` rows of `n` symbols; the diagonal is ignored.
    Incidence,
}

impl FromStr for NetworkFormat {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "vector" => Ok(NetworkFormat::Vector),
            "incidence" => Ok(NetworkFormat::Incidence),
            other => Err(format!("unknown network format `{other}` (expected vector|incidence)")),
        }
    }
}

impl Network {
    /// Builds a network from per-dyad configuration indices.
    pub fn from_states(n: usize, states: Vec<u8>) -> Result<Network> {
        if states.len() != num_dyads(n) {
            return Err(Error::Dimension(format!(
                "expected {} dyad states for n = {n}, got {}",
                num_dyads(n),
                states.len()
            )));
        }
        if let Some(s) = states.iter().find(|&&s| s > 3) {
            return Err(Error::Parse(format!("dyad state {s} out of range 0..4")));
        }
        Ok(Network { n, states })
    }

    /// The network with no edges.
    pub fn empty(n: usize) -> Network {
        Network { n, states: vec![0; num_dyads(n)] }
    }

    /// Builds a network from an adjacency predicate `edge(i, j)` meaning `i -> j`.
    pub fn from_edges(n: usize, edge: impl Fn(usize, usize) -> bool) -> Network {
        let states = dyads(n)
            .into_iter()
            .map(|(i, j)| config_index(edge(i, j) as u8, edge(j, i) as u8))
            .collect();
        Network { n, states }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn states(&self) -> &[u8] {
        &self.states
    }

    /// Column index chosen by the network in each dyad block.
    pub fn columns(&self) -> impl Iterator<Item = usize> + '_ {
        self.states.iter().enumerate().map(|(d, &s)| 4 * d + s as usize)
    }

    /// The 0/1 indicator vector of length `2n(n-1)`.
    pub fn indicator(&self) -> Vec<u8> {
        let mut v = vec![0u8; 4 * self.states.len()];
        for c in self.columns() {
            v[c] = 1;
        }
        v
    }

    /// Whether `i -> j` is an edge (zero-based, `i != j`).
    pub fn has_edge(&self, i: usize, j: usize) -> bool {
        assert!(i != j && i < self.n && j < self.n);
        if i < j {
            CONFIGS[self.states[dyad_index(self.n, i, j)] as usize].0 == 1
        } else {
            CONFIGS[self.states[dyad_index(self.n, j, i)] as usize].1 == 1
        }
    }

    /// Incidence matrix with `false` on the diagonal.
    pub fn incidence(&self) -> Vec<Vec<bool>> {
        (0..self.n)
            .map(|i| (0..self.n).map(|j| i != j && self.has_edge(i, j)).collect())
            .collect()
    }

    pub fn out_degrees(&self) -> Vec<usize> {
        (0..self.n)
            .map(|i| (0..self.n).filter(|&j| j != i && self.has_edge(i, j)).count())
            .collect()
    }

    pub fn in_degrees(&self) -> Vec<usize> {
        (0..self.n)
            .map(|j| (0..self.n).filter(|&i| i != j && self.has_edge(i, j)).count())
            .collect()
    }

    /// Parses a network in the given format. For the vector format `n` is
    /// inferred from the token count; for the incidence format from the row count.
    pub fn parse(text: &str, format: NetworkFormat) -> Result<Network> {
        match format {
            NetworkFormat::Vector => parse_vector(text),
            NetworkFormat::Incidence => parse_incidence(text),
        }
    }

    pub fn render(&self, format: NetworkFormat) -> String {
        match format {
            NetworkFormat::Vector => {
                let tokens: Vec<&str> =
                    self.indicator().iter().map(|&b| if b == 1 { "1" } else { "0" }).collect();
                tokens.join(" ")
            }
            NetworkFormat::Incidence => {
                let mut out = String::new();
                for i in 0..self.n {
                    let row: Vec<&str> = (0..self.n)
                        .map(|j| {
                            if i == j {
                                "x"
                            } else if self.has_edge(i, j) {
                                "1"
                            } else {
                                "0"
                            }
                        })
                        .collect();
                    out.push_str(&row.join(" "));
                    out.push('\n');
                }
                out
            }
        }
    }
}

fn config_index(a: u8, b: u8) -> u8 {
    match (a, b) {
        (0, 0) => 0,
        (1, 0) => 1,
        (0, 1) => 2,
        _ => 3,
    }
}

fn parse_vector(text: &str) -> Result<Network> {
    let tokens: Vec<&str> = text.split_whitespace().collect();
    let len = tokens.len();
    // Solve 2n(n-1) = len for n.
    let n = (3..64).find(|n| 2 * n * (n - 1) >= len).unwrap_or(0);
    if n == 0 || 2 * n * (n - 1) != len {
        return Err(Error::Parse(format!(
            "vector format needs 2n(n-1) tokens for some n >= 3, got {len}"
        )));
    }
    let mut states = Vec::with_capacity(num_dyads(n));
    for (d, block) in tokens.chunks(4).enumerate() {
        let mut hot = None;
        for (k, tok) in block.iter().enumerate() {
            match *tok {
                "0" => {}
                "1" => {
                    if hot.is_some() {
                        return Err(Error::Parse(format!(
                            "dyad block {} has more than one 1",
                            d + 1
                        )));
                    }
                    hot = Some(k as u8);
                }
                other => {
                    return Err(Error::Parse(format!("token `{other}` is not 0 or 1")));
                }
            }
        }
        match hot {
            Some(k) => states.push(k),
            None => return Err(Error::Parse(format!("dyad block {} has no 1", d + 1))),
        }
    }
    Ok(Network { n, states })
}

fn parse_incidence(text: &str) -> Result<Network> {
    let rows: Vec<Vec<&str>> = text
        .lines()
        .map(|l| l.split_whitespace().collect::<Vec<_>>())
        .filter(|r| !r.is_empty())
        .collect();
    let n = rows.len();
    if n < 3 {
        return Err(Error::Parse(format!("incidence format needs at least 3 rows, got {n}")));
    }
    let mut adj = vec![vec![false; n]; n];
    for (i, row) in rows.iter().enumerate() {
        if row.len() != n {
            return Err(Error::Parse(format!(
                "incidence row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        for (j, tok) in row.iter().enumerate() {
            if i == j {
                continue;
            }
            adj[i][j] = match *tok {
                "0" => false,
                "1" => true,
                other => {
                    return Err(Error::Parse(format!(
                        "incidence entry ({}, {}) is `{other}`, expected 0 or 1",
                        i + 1,
                        j + 1
                    )))
                }
            };
        }
    }
    Ok(Network::from_edges(n, |i, j| adj[i][j]))
}

/// A named parameter row of a design matrix (zero-based node indices).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    Lambda(usize, usize),
    Theta,
    Alpha(usize),
    Beta(usize),
    Rho,
    RhoNode(usize),
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Param::Lambda(i, j) => write!(f, "lambda_{{{},{}}}", i + 1, j + 1),
            Param::Theta => f.write_str("theta"),
            Param::Alpha(i) => write!(f, "alpha_{}", i + 1),
            Param::Beta(i) => write!(f, "beta_{}", i + 1),
            Param::Rho => f.write_str("rho"),
            Param::RhoNode(i) => write!(f, "rho_{}", i + 1),
        }
    }
}

impl Param {
    /// Coefficient of this parameter in `log p_{i,j}(a,b)`.
    fn coefficient(self, variant: ReciprocityVariant, i: usize, j: usize, a: u8, b: u8) -> i64 {
        let (a, b) = (a as i64, b as i64);
        let both = a.min(b);
        match self {
            Param::Lambda(p, q) => ((p, q) == (i, j)) as i64,
            Param::Theta => a + b,
            Param::Alpha(k) => (k == i) as i64 * a + (k == j) as i64 * b,
            Param::Beta(k) => (k == j) as i64 * a + (k == i) as i64 * b,
            Param::Rho => match variant {
                ReciprocityVariant::Zero => 0,
                _ => both,
            },
            Param::RhoNode(k) => match variant {
                ReciprocityVariant::EdgeDependent => ((k == i) || (k == j)) as i64 * both,
                _ => 0,
            },
        }
    }
}

/// A dense integer matrix in row-major order.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntMatrix {
    rows: usize,
    cols: usize,
    data: Vec<i64>,
}

impl IntMatrix {
    pub fn zeros(rows: usize, cols: usize) -> IntMatrix {
        IntMatrix { rows, cols, data: vec![0; rows * cols] }
    }

    pub fn from_rows(rows: &[Vec<i64>]) -> IntMatrix {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged matrix");
        IntMatrix { rows: r, cols: c, data: rows.concat() }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, r: usize, c: usize) -> i64 {
        self.data[r * self.cols + c]
    }

    pub fn set(&mut self, r: usize, c: usize, v: i64) {
        self.data[r * self.cols + c] = v;
    }

    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }

    pub fn column(&self, c: usize) -> Vec<i64> {
        (0..self.rows).map(|r| self.get(r, c)).collect()
    }

    pub fn columns(&self) -> Vec<Vec<i64>> {
        (0..self.cols).map(|c| self.column(c)).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<i64>> {
        (0..self.rows).map(|r| self.row(r).to_vec()).collect()
    }

    pub fn transpose(&self) -> IntMatrix {
        let mut t = IntMatrix::zeros(self.cols, self.rows);
        for r in 0..self.rows {
            for c in 0..self.cols {
                t.set(c, r, self.get(r, c));
            }
        }
        t
    }

    /// Keeps only the listed rows, in the given order.
    pub fn select_rows(&self, rows: &[usize]) -> IntMatrix {
        IntMatrix::from_rows(&rows.iter().map(|&r| self.row(r).to_vec()).collect::<Vec<_>>())
    }

    /// Keeps only the listed columns, in the given order.
    pub fn select_columns(&self, cols: &[usize]) -> IntMatrix {
        let mut out = IntMatrix::zeros(self.rows, cols.len());
        for r in 0..self.rows {
            for (k, &c) in cols.iter().enumerate() {
                out.set(r, k, self.get(r, c));
            }
        }
        out
    }

    /// `self * x` for an integer vector.
    pub fn mul_vec(&self, x: &[i64]) -> Vec<i64> {
        assert_eq!(x.len(), self.cols);
        (0..self.rows)
            .map(|r| self.row(r).iter().zip(x).map(|(a, b)| a * b).sum())
            .collect()
    }
}

/// A p1 design matrix together with its row labels.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DesignMatrix {
    n: usize,
    variant: ReciprocityVariant,
    include_theta: bool,
    params: Vec<Param>,
    entries: IntMatrix,
}

impl DesignMatrix {
    /// Builds the design matrix of the p1 model on `n` nodes.
    ///
    /// Rows: `lambda_{i,j}` (lexicographic), `theta` if included,
    /// `alpha_1..alpha_n`, `beta_1..beta_n`, then `rho` for the constant
    /// variant or `rho, rho_1..rho_n` for the edge-dependent one.
    pub fn new(n: usize, variant: ReciprocityVariant, include_theta: bool) -> Result<DesignMatrix> {
        if n < 3 {
            return Err(Error::TooFewNodes(n));
        }
        let mut params: Vec<Param> = dyads(n).into_iter().map(|(i, j)| Param::Lambda(i, j)).collect();
        if include_theta {
            params.push(Param::Theta);
        }
        params.extend((0..n).map(Param::Alpha));
        params.extend((0..n).map(Param::Beta));
        match variant {
            ReciprocityVariant::Zero => {}
            ReciprocityVariant::Constant => params.push(Param::Rho),
            ReciprocityVariant::EdgeDependent => {
                params.push(Param::Rho);
                params.extend((0..n).map(Param::RhoNode));
            }
        }
        let ds = dyads(n);
        let mut entries = IntMatrix::zeros(params.len(), 4 * ds.len());
        for (r, p) in params.iter().enumerate() {
            for (d, &(i, j)) in ds.iter().enumerate() {
                for (k, &(a, b)) in CONFIGS.iter().enumerate() {
                    entries.set(r, 4 * d + k, p.coefficient(variant, i, j, a, b));
                }
            }
        }
        Ok(DesignMatrix { n, variant, include_theta, params, entries })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn variant(&self) -> ReciprocityVariant {
        self.variant
    }

    pub fn include_theta(&self) -> bool {
        self.include_theta
    }

    pub fn params(&self) -> &[Param] {
        &self.params
    }

    pub fn entries(&self) -> &IntMatrix {
        &self.entries
    }

    pub fn nrows(&self) -> usize {
        self.entries.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.entries.ncols()
    }

    pub fn num_dyads(&self) -> usize {
        num_dyads(self.n)
    }

    pub fn row_labels(&self) -> Vec<String> {
        self.params.iter().map(ToString::to_string).collect()
    }

    pub fn column_labels(&self) -> Vec<String> {
        (0..self.ncols()).map(|c| column_label(self.n, c)).collect()
    }

    /// Columns of `A` belonging to dyad number `d`.
    pub fn dyad_columns(&self, d: usize) -> std::ops::Range<usize> {
        4 * d..4 * d + 4
    }

    /// The submatrix `A_{i,j}` for dyad number `d`.
    pub fn dyad_block(&self, d: usize) -> IntMatrix {
        self.entries.select_columns(&self.dyad_columns(d).collect::<Vec<_>>())
    }

    /// Rows outside the lambda block.
    pub fn non_lambda_rows(&self) -> std::ops::Range<usize> {
        self.num_dyads()..self.nrows()
    }

    /// The margin vector `t = A x` of a network.
    pub fn sufficient_statistic(&self, x: &Network) -> Result<MarginVector> {
        if x.n() != self.n {
            return Err(Error::Dimension(format!(
                "network has {} nodes but the design matrix is for {}",
                x.n(),
                self.n
            )));
        }
        let mut t = vec![0i64; self.nrows()];
        for c in x.columns() {
            for (r, slot) in t.iter_mut().enumerate() {
                *slot += self.entries.get(r, c);
            }
        }
        Ok(MarginVector(t))
    }

    /// Writes the matrix as CSV: header of column labels, first column of
    /// parameter labels.
    pub fn write_csv<W: std::io::Write>(&self, out: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(out);
        let mut header = vec!["param".to_string()];
        header.extend(self.column_labels());
        w.write_record(&header)?;
        for (r, label) in self.row_labels().into_iter().enumerate() {
            let mut rec = vec![label];
            rec.extend(self.entries.row(r).iter().map(ToString::to_string));
            w.write_record(&rec)?;
        }
        w.flush()?;
        Ok(())
    }
}

/// The `2n x n(n-1)` matrix of alpha/beta rows against single-edge columns
/// `p_{i,j}(1,0), p_{i,j}(0,1)` shared by all variants.
pub fn common_submatrix(n: usize) -> Result<IntMatrix> {
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    let ds = dyads(n);
    let mut b = IntMatrix::zeros(2 * n, 2 * ds.len());
    for (d, &(i, j)) in ds.iter().enumerate() {
        // i -> j: out of i, into j
        b.set(i, 2 * d, 1);
        b.set(n + j, 2 * d, 1);
        // j -> i
        b.set(j, 2 * d + 1, 1);
        b.set(n + i, 2 * d + 1, 1);
    }
    Ok(b)
}

/// Incidence cell `(from, to)` (zero-based) of column `c` of the common submatrix.
pub fn common_submatrix_cell(n: usize, c: usize) -> (usize, usize) {
    let (i, j) = dyads(n)[c / 2];
    if c % 2 == 0 {
        (i, j)
    } else {
        (j, i)
    }
}

/// An integer margin vector indexed by design-matrix rows.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MarginVector(pub Vec<i64>);

impl MarginVector {
    pub fn values(&self) -> &[i64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

/// Iterator over all `4^{C(n,2)}` networks in base-4 counting order, with
/// the first dyad varying slowest.
///
/// `stride`/`offset` select every `stride`-th network starting at `offset`,
/// which lets parallel workers partition the sample space.
pub struct NetworkEnumerator {
    n: usize,
    next: u64,
    end: u64,
    stride: u64,
}

impl Iterator for NetworkEnumerator {
    type Item = Network;

    fn next(&mut self) -> Option<Network> {
        if self.next >= self.end {
            return None;
        }
        let net = network_at(self.n, self.next);
        self.next += self.stride;
        Some(net)
    }

    fn size_hint(&self) -> (usize, Option<usize>) {
        let left = if self.next >= self.end {
            0
        } else {
            ((self.end - self.next - 1) / self.stride + 1) as usize
        };
        (left, Some(left))
    }
}

impl ExactSizeIterator for NetworkEnumerator {}

/// Total number of networks on `n` nodes.
pub fn sample_space_size(n: usize) -> u64 {
    4u64.pow(num_dyads(n) as u32)
}

/// The `index`-th network in enumeration order.
pub fn network_at(n: usize, index: u64) -> Network {
    let m = num_dyads(n);
    let mut states = vec![0u8; m];
    let mut rest = index;
    for d in (0..m).rev() {
        states[d] = (rest % 4) as u8;
        rest /= 4;
    }
    Network { n, states }
}

/// Enumerates every network on `n` nodes; rejects `n > cap`.
pub fn enumerate_networks(n: usize, cap: usize) -> Result<NetworkEnumerator> {
    enumerate_networks_strided(n, cap, 0, 1)
}

/// Enumerates networks `offset, offset + stride, ...`.
pub fn enumerate_networks_strided(
    n: usize,
    cap: usize,
    offset: u64,
    stride: u64,
) -> Result<NetworkEnumerator> {
    if n < 3 {
        return Err(Error::TooFewNodes(n));
    }
    if n > cap {
        return Err(Error::SizeCap { n, cap });
    }
    assert!(stride > 0);
    Ok(NetworkEnumerator { n, next: offset, end: sample_space_size(n), stride })
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIRST_CYCLE: &str = "0 0 1 0 0 1 0 0 0 0 1 0";
    const SECOND_CYCLE: &str = "0 1 0 0 0 0 1 0 0 1 0 0";

    #[test]
    fn dyad_indexing() {
        for n in 3..8 {
            for (k, (i, j)) in dyads(n).into_iter().enumerate() {
                assert_eq!(dyad_index(n, i, j), k);
            }
        }
    }

    #[test]
    fn rejects_small_n() {
        assert!(matches!(
            DesignMatrix::new(2, ReciprocityVariant::Zero, true),
            Err(Error::TooFewNodes(2))
        ));
        assert!(common_submatrix(2).is_err());
    }

    #[test]
    fn shapes() {
        let a = DesignMatrix::new(3, ReciprocityVariant::Zero, false).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (9, 12));
        let a = DesignMatrix::new(4, ReciprocityVariant::EdgeDependent, false).unwrap();
        assert_eq!((a.nrows(), a.ncols()), (19, 24));
        let b = common_submatrix(4).unwrap();
        assert_eq!((b.nrows(), b.ncols()), (8, 12));
    }

    #[test]
    fn empty_column_is_lambda_indicator() {
        for variant in ReciprocityVariant::ALL {
            for theta in [false, true] {
                let a = DesignMatrix::new(4, variant, theta).unwrap();
                for d in 0..a.num_dyads() {
                    let col = a.entries().column(4 * d);
                    let mut expected = vec![0; a.nrows()];
                    expected[d] = 1;
                    assert_eq!(col, expected);
                    // exactly one 1 in the lambda block for every column of the dyad
                    for c in a.dyad_columns(d) {
                        let lam: Vec<i64> = (0..a.num_dyads()).map(|r| a.entries().get(r, c)).collect();
                        assert_eq!(lam.iter().sum::<i64>(), 1);
                        assert_eq!(lam[d], 1);
                    }
                }
            }
        }
    }

    #[test]
    fn common_submatrix_columns_sum_to_two() {
        let b = common_submatrix(5).unwrap();
        for c in 0..b.ncols() {
            assert_eq!(b.column(c).iter().sum::<i64>(), 2);
        }
    }

    #[test]
    fn parses_first_cycle() {
        let x = Network::parse(FIRST_CYCLE, NetworkFormat::Vector).unwrap();
        assert_eq!(x.n(), 3);
        // edges 2->1, 1->3, 3->2
        assert!(x.has_edge(1, 0) && x.has_edge(0, 2) && x.has_edge(2, 1));
        assert!(!x.has_edge(0, 1) && !x.has_edge(2, 0) && !x.has_edge(1, 2));
        assert_eq!(x.render(NetworkFormat::Vector), FIRST_CYCLE);
        assert_eq!(x.render(NetworkFormat::Incidence), "x 0 1\n1 x 0\n0 1 x\n");
        let y = Network::parse(SECOND_CYCLE, NetworkFormat::Vector).unwrap();
        assert_eq!(y.render(NetworkFormat::Incidence), "x 1 0\n0 x 1\n1 0 x\n");
    }

    #[test]
    fn parse_errors() {
        assert!(Network::parse("1 1 0 0 0 1 0 0 0 0 1 0", NetworkFormat::Vector).is_err());
        assert!(Network::parse("0 0 0 0 0 1 0 0 0 0 1 0", NetworkFormat::Vector).is_err());
        assert!(Network::parse("0 0 1 0 0 1 0 0 0 0 1", NetworkFormat::Vector).is_err());
        assert!(Network::parse("0 0 2 0 0 1 0 0 0 0 1 0", NetworkFormat::Vector).is_err());
        assert!(Network::parse("x 0 2\n1 x 0\n0 1 x", NetworkFormat::Incidence).is_err());
        assert!(Network::parse("x 0\n1 x 0\n0 1 x", NetworkFormat::Incidence).is_err());
    }

    #[test]
    fn incidence_all_zero() {
        let x = Network::parse("- 0 0\n0 - 0\n0 0 -", NetworkFormat::Incidence).unwrap();
        assert_eq!(x, Network::empty(3));
    }

    #[test]
    fn first_cycle_statistic() {
        let a = DesignMatrix::new(3, ReciprocityVariant::Zero, true).unwrap();
        let x = Network::parse(FIRST_CYCLE, NetworkFormat::Vector).unwrap();
        let y = Network::parse(SECOND_CYCLE, NetworkFormat::Vector).unwrap();
        let t = a.sufficient_statistic(&x).unwrap();
        // lambda x3, theta, alpha x3, beta x3
        assert_eq!(t.values(), &[1, 1, 1, 3, 1, 1, 1, 1, 1, 1]);
        assert_eq!(t, a.sufficient_statistic(&y).unwrap());
        let other = DesignMatrix::new(4, ReciprocityVariant::Zero, true).unwrap();
        assert!(other.sufficient_statistic(&x).is_err());
    }

    #[test]
    fn enumeration_counts() {
        assert_eq!(enumerate_networks(3, 5).unwrap().count(), 64);
        assert_eq!(enumerate_networks(4, 5).unwrap().len(), 4096);
        assert_eq!(enumerate_networks(5, 5).unwrap().len(), 1_048_576);
        assert!(matches!(enumerate_networks(6, 5), Err(Error::SizeCap { n: 6, cap: 5 })));
        let all: std::collections::HashSet<Network> = enumerate_networks(3, 5).unwrap().collect();
        assert_eq!(all.len(), 64);
        let strided: usize = (0..3).map(|o| enumerate_networks_strided(4, 5, o, 3).unwrap().count()).sum();
        assert_eq!(strided, 4096);
    }

    #[test]
    fn csv_export() {
        let a = DesignMatrix::new(3, ReciprocityVariant::Zero, false).unwrap();
        let mut buf = Vec::new();
        a.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let mut lines = text.lines();
        assert!(lines.next().unwrap().starts_with("param,\"p_{1,2}(0,0)\",\"p_{1,2}(1,0)\""));
        assert_eq!(lines.next().unwrap(), "\"lambda_{1,2}\",1,1,1,1,0,0,0,0,0,0,0,0");
        assert_eq!(text.lines().count(), 10);
    }
}
