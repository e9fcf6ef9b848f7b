//! Dense brute-force oracles and random instance generators shared by the
//! integration tests.

#![allow(dead_code, clippy::needless_range_loop)]

use std::collections::BTreeMap;

use interval_spheres::barcode::Bar;
use interval_spheres::complex::FilteredChainComplexInput;
use interval_spheres::kernel::SimplicialMapWithSection;
use interval_spheres::rips::{build_rips, rips_complex, DistanceMatrix, FilteredSimplicialComplex};
use interval_spheres::{Death, Time};
use rand::seq::SliceRandom;
use rand::Rng;

pub fn t(v: f64) -> Time {
    Time::new(v).unwrap()
}

fn inv_mod(a: u64, p: u64) -> u64 {
    // Fermat, independent of the library's extended Euclid
    let (mut base, mut exp, mut acc) = (a % p, p - 2, 1u64);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = acc * base % p;
        }
        base = base * base % p;
        exp >>= 1;
    }
    acc
}

/// Incremental row-echelon basis over `F_p` for dense vectors of fixed length.
pub struct EchelonBasis {
    p: u64,
    rows: Vec<(usize, Vec<u64>)>,
}

impl EchelonBasis {
    pub fn new(p: u64) -> Self {
        EchelonBasis { p, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds `v`; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<u64>) -> bool {
        let p = self.p;
        for (pivot, row) in &self.rows {
            let c = v[*pivot];
            if c != 0 {
                for (x, r) in v.iter_mut().zip(row) {
                    *x = (*x + (p - c) * r) % p;
                }
            }
        }
        match v.iter().position(|&x| x != 0) {
            Some(pivot) => {
                let scale = inv_mod(v[pivot], p);
                for x in v.iter_mut() {
                    *x = *x * scale % p;
                }
                self.rows.push((pivot, v));
                true
            }
            None => false,
        }
    }
}

pub fn rank(vectors: &[Vec<u64>], p: u64) -> usize {
    let mut basis = EchelonBasis::new(p);
    for v in vectors {
        basis.insert(v.clone());
    }
    basis.rank()
}

/// Multiplies two dense matrices over `F_p`.
pub fn mat_mul(a: &[Vec<u64>], b: &[Vec<u64>], p: u64) -> Vec<Vec<u64>> {
    let inner = b.len();
    let cols = b.first().map_or(0, Vec::len);
    a.iter()
        .map(|row| {
            (0..cols)
                .map(|c| (0..inner).map(|k| row[k] * b[k][c] % p).sum::<u64>() % p)
                .collect()
        })
        .collect()
}

/// Dense square differential of the input, `matrix[row][col]`.
pub fn dense_differential(input: &FilteredChainComplexInput, p: u64) -> Vec<Vec<u64>> {
    let m = input.len();
    let mut out = vec![vec![0u64; m]; m];
    for (col, g) in input.generators.iter().enumerate() {
        for &(row, c) in &g.boundary {
            out[row][col] = (out[row][col] + c.rem_euclid(p as i64) as u64) % p;
        }
    }
    out
}

/// Persistent homology of a filtered complex by dense ranks on its grid of
/// entrance times.
pub struct DenseHomology {
    pub grid: Vec<Time>,
    pub max_degree: usize,
    /// `betti[n][s][t]` for `s <= t`.
    betti: Vec<Vec<Vec<usize>>>,
    /// `boundary_rank[n][t]`: rank of the differential into degree n at `grid[t]`.
    boundary_rank: Vec<Vec<usize>>,
}

impl DenseHomology {
    pub fn new(input: &FilteredChainComplexInput, p: u64) -> Self {
        let labels: Vec<_> = input.labels().collect();
        let mut grid: Vec<Time> = labels.iter().map(|l| l.entrance).collect();
        grid.sort();
        grid.dedup();
        let max_degree = labels.iter().map(|l| l.degree).max().unwrap_or(0);
        let k = grid.len();
        let d = dense_differential(input, p);
        let slot = |e: Time| grid.binary_search(&e).unwrap();

        let of_degree = |n: usize| -> Vec<usize> {
            let mut v: Vec<usize> = (0..labels.len()).filter(|&g| labels[g].degree == n).collect();
            v.sort_by_key(|&g| labels[g].entrance);
            v
        };

        // prefix_rank(cols, row_ok)[t]: rank of columns entering by grid[t]
        let prefix_rank = |cols: &[usize], rows: &[usize], row_ok: &dyn Fn(usize) -> bool| -> Vec<usize> {
            let mut basis = EchelonBasis::new(p);
            let mut out = vec![0usize; k];
            let mut next = 0;
            for (step, out_t) in out.iter_mut().enumerate() {
                while next < cols.len() && slot(labels[cols[next]].entrance) <= step {
                    let c = cols[next];
                    let v: Vec<u64> = rows
                        .iter()
                        .map(|&r| if row_ok(r) { d[r][c] } else { 0 })
                        .collect();
                    basis.insert(v);
                    next += 1;
                }
                *out_t = basis.rank();
            }
            out
        };

        let mut betti = Vec::new();
        let mut boundary_rank = Vec::new();
        for n in 0..=max_degree {
            let cells = of_degree(n);
            let lower = if n > 0 { of_degree(n - 1) } else { Vec::new() };
            let upper = of_degree(n + 1);
            let count_at = |s: usize| cells.iter().filter(|&&g| slot(labels[g].entrance) <= s).count();
            let z_rank = prefix_rank(&cells, &lower, &|_| true);
            let b_rank = prefix_rank(&upper, &cells, &|_| true);
            let mut table = vec![vec![0usize; k]; k];
            for s in 0..k {
                let cycles = count_at(s) - z_rank[s];
                let outside = prefix_rank(&upper, &cells, &|r| slot(labels[r].entrance) > s);
                for t in s..k {
                    let meet = b_rank[t] - outside[t];
                    table[s][t] = cycles - meet;
                }
            }
            betti.push(table);
            boundary_rank.push(b_rank);
        }
        DenseHomology {
            grid,
            max_degree,
            betti,
            boundary_rank,
        }
    }

    pub fn betti(&self, n: usize, s: usize, t: usize) -> usize {
        self.betti[n][s][t]
    }

    fn b(&self, n: usize, s: isize, t: usize) -> i64 {
        if s < 0 {
            0
        } else {
            self.betti[n][s as usize][t] as i64
        }
    }

    pub fn bars(&self) -> Vec<Bar> {
        let k = self.grid.len();
        let mut out = Vec::new();
        for n in 0..=self.max_degree {
            for i in 0..k {
                let si = i as isize;
                for j in i + 1..k {
                    let mu = self.b(n, si, j - 1) - self.b(n, si, j) - self.b(n, si - 1, j - 1)
                        + self.b(n, si - 1, j);
                    assert!(mu >= 0, "negative multiplicity");
                    for _ in 0..mu {
                        out.push(Bar::new(n, self.grid[i], Death::At(self.grid[j])).unwrap());
                    }
                }
                let mu = self.b(n, si, k - 1) - self.b(n, si - 1, k - 1);
                assert!(mu >= 0, "negative multiplicity");
                for _ in 0..mu {
                    out.push(Bar::new(n, self.grid[i], Death::Never).unwrap());
                }
            }
        }
        out.sort();
        out
    }

    /// Zero-length spheres per `(n, t)`: boundaries born at `t` that are not
    /// deaths of bars.
    pub fn zero_length_counts(&self) -> BTreeMap<(usize, Time), usize> {
        let bars = self.bars();
        let mut out = BTreeMap::new();
        for n in 0..=self.max_degree {
            for (step, &time) in self.grid.iter().enumerate() {
                let before = if step == 0 { 0 } else { self.boundary_rank[n][step - 1] };
                let jump = self.boundary_rank[n][step] - before;
                let dying = bars
                    .iter()
                    .filter(|b| b.dimension == n && b.death == Death::At(time))
                    .count();
                assert!(jump >= dying);
                if jump > dying {
                    out.insert((n, time), jump - dying);
                }
            }
        }
        out
    }
}

/// Symmetric matrix with zero diagonal; entries uniform in `1..=range`, or
/// continuous in `(0, 10)` when `range` is zero.
pub fn random_distances(rng: &mut impl Rng, v: usize, range: u32) -> DistanceMatrix {
    let mut rows = vec![vec![0.0; v]; v];
    for a in 0..v {
        for b in a + 1..v {
            let d = if range == 0 {
                rng.gen_range(0.01..10.0)
            } else {
                rng.gen_range(1..=range) as f64
            };
            rows[a][b] = d;
            rows[b][a] = d;
        }
    }
    DistanceMatrix::new(rows).unwrap()
}

pub fn random_rips(rng: &mut impl Rng, v: usize, max_degree: usize, range: u32) -> FilteredChainComplexInput {
    build_rips(&random_distances(rng, v, range), max_degree, None)
}

/// Simplicial complex on `v` vertices grown by random cofaces, with all
/// entrance times distinct and increasing along the listing.
pub fn random_distinct_filtration(rng: &mut impl Rng, v: usize, extra: usize) -> FilteredSimplicialComplex {
    let mut text = String::new();
    let mut present: Vec<Vec<usize>> = (0..v).map(|a| vec![a]).collect();
    let mut time = 0.0;
    for a in 0..v {
        text.push_str(&format!("v{a} : {time}\n"));
        time += 1.0;
    }
    let mut attempts = 0;
    let mut added = 0;
    while added < extra && attempts < 200 {
        attempts += 1;
        let size = rng.gen_range(2..=4.min(v));
        let mut verts: Vec<usize> = (0..v).collect();
        verts.shuffle(rng);
        let mut simplex: Vec<usize> = verts[..size].to_vec();
        simplex.sort_unstable();
        if present.contains(&simplex) {
            continue;
        }
        let faces_ok = (0..size).all(|skip| {
            let face: Vec<usize> = simplex
                .iter()
                .enumerate()
                .filter(|&(k, _)| k != skip)
                .map(|(_, &x)| x)
                .collect();
            present.contains(&face)
        });
        if !faces_ok {
            continue;
        }
        let names: Vec<String> = simplex.iter().map(|x| format!("v{x}")).collect();
        text.push_str(&format!("{} : {time}\n", names.join(" ")));
        time += 1.0;
        present.push(simplex);
        added += 1;
    }
    FilteredSimplicialComplex::parse_filtration(&text).unwrap()
}

/// Parity of the permutation that sorts `seq` (distinct entries).
fn sort_sign(seq: &[usize]) -> i64 {
    let mut inv = 0;
    for a in 0..seq.len() {
        for b in a + 1..seq.len() {
            if seq[a] > seq[b] {
                inv += 1;
            }
        }
    }
    if inv % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Dense matrix of the chain map in degree `n` at time `time`: rows are the
/// n-simplices of L present at `time`, columns those of K.
pub fn dense_chain_map(
    k: &FilteredSimplicialComplex,
    l: &FilteredSimplicialComplex,
    vertex_map: &[usize],
    n: usize,
    time: Time,
    p: u64,
) -> Vec<Vec<u64>> {
    let ks: Vec<usize> = (0..k.len())
        .filter(|&x| k.simplices()[x].dimension() == n && k.simplices()[x].entrance <= time)
        .collect();
    let ls: Vec<usize> = (0..l.len())
        .filter(|&x| l.simplices()[x].dimension() == n && l.simplices()[x].entrance <= time)
        .collect();
    let mut columns = Vec::new();
    for &sigma in &ks {
        let image: Vec<usize> = k.simplices()[sigma].vertices.iter().map(|&v| vertex_map[v]).collect();
        let mut sorted = image.clone();
        sorted.sort_unstable();
        let mut col = vec![0u64; ls.len()];
        if sorted.windows(2).all(|w| w[0] != w[1]) {
            let tau = ls
                .iter()
                .position(|&x| l.simplices()[x].vertices == sorted)
                .expect("image present by time");
            col[tau] = sort_sign(&image).rem_euclid(p as i64) as u64;
        }
        columns.push(col);
    }
    columns
}

/// `dim ker f_n^t` for every degree and grid time, by dense rank.
pub fn dense_kernel_profile(
    k: &FilteredSimplicialComplex,
    l: &FilteredSimplicialComplex,
    vertex_map: &[usize],
    grid: &[Time],
    max_degree: usize,
    p: u64,
) -> BTreeMap<(usize, Time), usize> {
    let mut out = BTreeMap::new();
    for n in 0..=max_degree {
        for &time in grid {
            let cols = dense_chain_map(k, l, vertex_map, n, time, p);
            out.insert((n, time), cols.len() - rank(&cols, p));
        }
    }
    out
}

/// `dim X_n^t - dim Y_n^t` for every degree and grid time.
pub fn chain_dimension_gap(
    k: &FilteredSimplicialComplex,
    l: &FilteredSimplicialComplex,
    grid: &[Time],
    max_degree: usize,
) -> BTreeMap<(usize, Time), usize> {
    let count = |c: &FilteredSimplicialComplex, n: usize, time: Time| {
        c.simplices().iter().filter(|s| s.dimension() == n && s.entrance <= time).count()
    };
    let mut out = BTreeMap::new();
    for n in 0..=max_degree {
        for &time in grid {
            out.insert((n, time), count(k, n, time) - count(l, n, time));
        }
    }
    out
}

/// Random collapse of a Rips complex onto the induced complex on a subset S:
/// distances inside S are 1 or 2, distances involving a point outside S are 2
/// to 4, points outside S are sent into S and the section is the inclusion.
pub struct CollapseInstance {
    pub k: FilteredSimplicialComplex,
    pub l: FilteredSimplicialComplex,
    pub map: SimplicialMapWithSection,
    pub max_degree: usize,
}

pub fn random_collapse(rng: &mut impl Rng, max_vertices: usize) -> CollapseInstance {
    let v = rng.gen_range(2..=max_vertices);
    let s_size = rng.gen_range(1..v);
    let max_degree = rng.gen_range(1..=3);
    let mut rows = vec![vec![0.0; v]; v];
    for a in 0..v {
        for b in a + 1..v {
            let d = if b < s_size {
                rng.gen_range(1..=2) as f64
            } else {
                rng.gen_range(2..=4) as f64
            };
            rows[a][b] = d;
            rows[b][a] = d;
        }
    }
    let names: Vec<String> = (0..v).map(|a| format!("p{a}")).collect();
    let dk = DistanceMatrix::new(rows.clone()).unwrap().with_labels(names.clone()).unwrap();
    let sub: Vec<Vec<f64>> = rows[..s_size].iter().map(|r| r[..s_size].to_vec()).collect();
    let dl = DistanceMatrix::new(sub).unwrap().with_labels(names[..s_size].to_vec()).unwrap();
    let k = rips_complex(&dk, max_degree, None);
    let l = rips_complex(&dl, max_degree, None);
    let vertex_map: Vec<usize> = (0..v)
        .map(|a| if a < s_size { a } else { rng.gen_range(0..s_size) })
        .collect();
    let section: Vec<usize> = (0..s_size).collect();
    let map = SimplicialMapWithSection::new(&k, &l, vertex_map, section).unwrap();
    CollapseInstance { k, l, map, max_degree }
}

/// Per `(n, t)` chain dimension of a direct sum of interval spheres: `I^n[s,e]`
/// spans degree n from s on and degree n+1 from e on.
pub fn sphere_profile(
    spheres: &[interval_spheres::IntervalSphere],
    grid: &[Time],
    max_degree: usize,
) -> BTreeMap<(usize, Time), usize> {
    let mut out = BTreeMap::new();
    for n in 0..=max_degree {
        for &time in grid {
            let here = spheres
                .iter()
                .filter(|s| s.dimension == n && s.birth <= time)
                .count()
                + spheres
                    .iter()
                    .filter(|s| s.dimension + 1 == n && s.death <= Death::At(time))
                    .count();
            out.insert((n, time), here);
        }
    }
    out
}
