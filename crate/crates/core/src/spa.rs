//! Column reduction of the boundary matrix, kept apart from the row-based
//! machinery of [`crate::decomposition`] so the two can check each other.
//!
//! Columns are reduced left to right until no two non-zero columns share a
//! pivot (the lowest non-zero row). A pivot `i` of column `j` gives the pair
//! `(i, j)`; a zero column whose index is never a pivot is essential.

use std::fmt::{self, Write as _};

use rand::rngs::StdRng;
use rand::seq::SliceRandom;
use rand::SeedableRng;

use crate::barcode::Bar;
use crate::complex::{FilteredChainComplexInput, TotalBoundaryMatrix};
use crate::decomposition::{Decomposer, Strategy};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::time::Death;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PersistencePair {
    /// Positive index.
    pub i: usize,
    /// Negative index, `None` for an essential class.
    pub j: Option<usize>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ReductionStats {
    /// Columns that entered the reduction loop.
    pub rows_processed: usize,
    pub column_additions: usize,
    pub cleared: usize,
    /// Rows removed from higher blocks because they belong to negative columns.
    pub compressed: usize,
}

impl fmt::Display for ReductionStats {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "rows_processed={}", self.rows_processed)?;
        writeln!(f, "column_additions={}", self.column_additions)?;
        writeln!(f, "cleared={}", self.cleared)?;
        writeln!(f, "compressed={}", self.compressed)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SpaMode {
    #[default]
    Plain,
    /// Degrees high to low; a new pivot `i` zeroes column `i` before it is
    /// reached.
    Clear,
    /// Degrees low to high; rows of negative columns are dropped from the next
    /// block.
    Compress,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SpaResult {
    /// Sorted by positive index.
    pub pairs: Vec<PersistencePair>,
    pub stats: ReductionStats,
}

type Column = Vec<(usize, u32)>;

/// `target += scalar * source` on sorted sparse columns.
fn axpy(field: FieldSpec, target: &Column, scalar: u32, source: &Column) -> Column {
    let mut out = Vec::with_capacity(target.len() + source.len());
    let (mut a, mut b) = (0, 0);
    while a < target.len() || b < source.len() {
        let next_a = target.get(a).map(|e| e.0).unwrap_or(usize::MAX);
        let next_b = source.get(b).map(|e| e.0).unwrap_or(usize::MAX);
        if next_a < next_b {
            out.push(target[a]);
            a += 1;
        } else if next_b < next_a {
            out.push((next_b, field.mul_raw(scalar, source[b].1)));
            b += 1;
        } else {
            let v = field.add_raw(target[a].1, field.mul_raw(scalar, source[b].1));
            if v != 0 {
                out.push((next_a, v));
            }
            a += 1;
            b += 1;
        }
    }
    out
}

fn check_order(input: &FilteredChainComplexInput, mode: SpaMode) -> Result<()> {
    let labels: Vec<_> = input.labels().collect();
    match mode {
        SpaMode::Plain | SpaMode::Clear => {
            if let Some(k) = (1..labels.len()).find(|&k| {
                (labels[k].entrance, labels[k].degree) < (labels[k - 1].entrance, labels[k - 1].degree)
            }) {
                return Err(Error::Usage(format!(
                    "generator {k} is out of (entrance, degree) order"
                )));
            }
        }
        SpaMode::Compress => {
            let mut last = std::collections::HashMap::new();
            for (k, l) in labels.iter().enumerate() {
                if let Some(&prev) = last.get(&l.degree) {
                    if l.entrance < prev {
                        return Err(Error::Usage(format!(
                            "generator {k} is out of entrance order within degree {}",
                            l.degree
                        )));
                    }
                }
                last.insert(l.degree, l.entrance);
            }
        }
    }
    Ok(())
}

pub fn spa_reduce(input: &FilteredChainComplexInput, field: FieldSpec, mode: SpaMode) -> Result<SpaResult> {
    // validation only; the reduction works on its own column store
    TotalBoundaryMatrix::build(input, field)?;
    check_order(input, mode)?;

    let m = input.len();
    let degrees: Vec<usize> = input.labels().map(|l| l.degree).collect();
    let mut columns: Vec<Column> = input
        .generators
        .iter()
        .map(|g| {
            let mut col: Column = g
                .boundary
                .iter()
                .map(|&(r, c)| (r, field.reduce(c)))
                .filter(|&(_, c)| c != 0)
                .collect();
            col.sort_unstable();
            col
        })
        .collect();

    let mut order: Vec<usize> = (0..m).collect();
    match mode {
        SpaMode::Plain => {}
        SpaMode::Clear => order.sort_by_key(|&k| (std::cmp::Reverse(degrees[k]), k)),
        SpaMode::Compress => order.sort_by_key(|&k| (degrees[k], k)),
    }

    let mut stats = ReductionStats::default();
    let mut owner_of_pivot: Vec<Option<usize>> = vec![None; m];
    let mut cleared = vec![false; m];
    let mut negative = vec![false; m];

    for &j in &order {
        if cleared[j] {
            continue;
        }
        stats.rows_processed += 1;
        let mut col = std::mem::take(&mut columns[j]);
        if mode == SpaMode::Compress {
            let before = col.len();
            col.retain(|&(r, _)| !negative[r]);
            stats.compressed += before - col.len();
        }
        while let Some(&(pivot, lead)) = col.last() {
            match owner_of_pivot[pivot] {
                Some(k) => {
                    let other = &columns[k];
                    let other_lead = other.last().expect("pivot columns are non-zero").1;
                    let scalar = field.neg_raw(field.mul_raw(lead, field.inv_raw(other_lead)?));
                    col = axpy(field, &col, scalar, other);
                    stats.column_additions += 1;
                }
                None => {
                    owner_of_pivot[pivot] = Some(j);
                    negative[j] = true;
                    if mode == SpaMode::Clear && !cleared[pivot] {
                        cleared[pivot] = true;
                        columns[pivot].clear();
                        stats.cleared += 1;
                    }
                    break;
                }
            }
        }
        columns[j] = col;
    }

    let mut pairs = Vec::new();
    for i in 0..m {
        if let Some(j) = owner_of_pivot[i] {
            pairs.push(PersistencePair { i, j: Some(j) });
        } else if columns[i].is_empty() {
            pairs.push(PersistencePair { i, j: None });
        }
    }
    Ok(SpaResult { pairs, stats })
}

/// Bars of positive length in the pairing, sorted.
pub fn bars_of_pairs(input: &FilteredChainComplexInput, pairs: &[PersistencePair]) -> Vec<Bar> {
    let labels: Vec<_> = input.labels().collect();
    let mut bars: Vec<Bar> = pairs
        .iter()
        .filter_map(|p| {
            let death = p.j.map_or(Death::Never, |j| Death::At(labels[j].entrance));
            Bar::new(labels[p.i].degree, labels[p.i].entrance, death)
        })
        .collect();
    bars.sort();
    bars
}

/// Shuffles every run of consecutive generators with equal (entrance, degree).
pub fn shuffle_ties(input: &FilteredChainComplexInput, seed: u64) -> FilteredChainComplexInput {
    let mut rng = StdRng::seed_from_u64(seed);
    let labels: Vec<_> = input.labels().collect();
    let mut order: Vec<usize> = (0..input.len()).collect();
    let mut start = 0;
    while start < order.len() {
        let mut end = start + 1;
        while end < order.len() && labels[end] == labels[start] {
            end += 1;
        }
        order[start..end].shuffle(&mut rng);
        start = end;
    }
    input.permuted(&order).expect("shuffled order is a permutation")
}

fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    (0..k).fold(1, |acc, step| acc * (n - step) / (step + 1))
}

/// Row iterations of the row-based decomposition on the full Rips complex on
/// `vertices` points up to degree `max_degree`.
///
/// Without compression every generator is one row. With compression the
/// partner of each split is gone before its row comes up, which leaves one
/// vertex plus `C(v-1, n)` rows in each degree `1..=N+1`.
pub fn predicted_row_iterations(vertices: usize, max_degree: usize, with_compress: bool) -> usize {
    if with_compress {
        1 + (1..=max_degree + 1)
            .map(|n| binomial(vertices.saturating_sub(1), n))
            .sum::<usize>()
    } else {
        (0..=max_degree).map(|n| binomial(vertices, n + 1)).sum()
    }
}

/// Rows visited by the row-based decomposition in degree-major order.
pub fn measured_row_iterations(
    input: &FilteredChainComplexInput,
    field: FieldSpec,
    with_compress: bool,
) -> Result<usize> {
    let matrix = TotalBoundaryMatrix::build(input, field)?;
    let mut run = Decomposer::new(matrix, Strategy::DegreeSweep);
    if !with_compress {
        run = run.without_compress();
    }
    while run.step()?.is_some() {}
    Ok(run.rows_visited())
}

/// `dim birth death` per positive-length pair, then the stats block.
pub fn write_spa_text(input: &FilteredChainComplexInput, result: &SpaResult) -> String {
    let mut out = String::new();
    for bar in bars_of_pairs(input, &result.pairs) {
        let _ = writeln!(out, "{bar}");
    }
    let _ = write!(out, "{}", result.stats);
    out
}
