//! Persistence barcodes read off a decomposition.
//!
//! `I^n[s, e]` contributes the bar `[s, e)` to `H_n` when `s < e`. Spheres with
//! `s = e` have no homology; they are kept as a count per `(n, s)`.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};

use crate::decomposition::{Decomposition, IntervalSphere};
use crate::error::{Error, Result};
use crate::time::{Death, Time};

/// Half-open interval `[birth, death)` in homological dimension `dimension`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Bar {
    pub dimension: usize,
    pub birth: Time,
    pub death: Death,
}

impl Bar {
    /// Returns `None` unless `birth < death`.
    pub fn new(dimension: usize, birth: Time, death: Death) -> Option<Bar> {
        (Death::At(birth) < death).then_some(Bar {
            dimension,
            birth,
            death,
        })
    }
}

impl fmt::Display for Bar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {} {}", self.dimension, self.birth, self.death)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct PersistenceDiagram {
    /// Sorted by dimension, birth, death.
    pub bars: Vec<Bar>,
    /// Number of zero-length spheres per `(dimension, time)`.
    pub zero_length_count: BTreeMap<(usize, Time), usize>,
}

impl PersistenceDiagram {
    pub fn from_spheres<'a>(spheres: impl IntoIterator<Item = &'a IntervalSphere>) -> Self {
        let mut diagram = PersistenceDiagram::default();
        for s in spheres {
            match Bar::new(s.dimension, s.birth, s.death) {
                Some(bar) => diagram.bars.push(bar),
                None => {
                    *diagram
                        .zero_length_count
                        .entry((s.dimension, s.birth))
                        .or_insert(0) += 1
                }
            }
        }
        diagram.bars.sort();
        diagram
    }

    pub fn in_dimension(&self, dimension: usize) -> impl Iterator<Item = &Bar> + '_ {
        self.bars.iter().filter(move |b| b.dimension == dimension)
    }

    pub fn bar_multiset(&self) -> BTreeMap<Bar, usize> {
        bar_multiset(&self.bars)
    }

    pub fn zero_length_total(&self) -> usize {
        self.zero_length_count.values().sum()
    }
}

pub fn bar_multiset(bars: &[Bar]) -> BTreeMap<Bar, usize> {
    let mut out = BTreeMap::new();
    for b in bars {
        *out.entry(*b).or_insert(0) += 1;
    }
    out
}

pub fn to_barcode(dec: &Decomposition) -> PersistenceDiagram {
    PersistenceDiagram::from_spheres(&dec.spheres)
}

/// Largest birth among degree-1 spheres. On a Rips filtration built up to
/// degree 2 or more this is the diameter of the point cloud.
pub fn diameter_witness(dec: &Decomposition) -> Option<Time> {
    dec.spheres
        .iter()
        .filter(|s| s.dimension == 1)
        .map(|s| s.birth)
        .max()
}

/// `dim birth death` per bar, then `dim time time Z` once per zero-length
/// sphere when `include_zero_length` is set.
pub fn write_barcode_text(diagram: &PersistenceDiagram, include_zero_length: bool) -> String {
    let mut out = String::new();
    for bar in &diagram.bars {
        let _ = writeln!(out, "{bar}");
    }
    if include_zero_length {
        for (&(dim, time), &count) in &diagram.zero_length_count {
            for _ in 0..count {
                let _ = writeln!(out, "{dim} {time} {time} Z");
            }
        }
    }
    out
}

pub fn parse_barcode_text(text: &str) -> Result<PersistenceDiagram> {
    let mut diagram = PersistenceDiagram::default();
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("");
        let toks: Vec<&str> = content.split_whitespace().collect();
        if toks.is_empty() {
            continue;
        }
        if !(3..=4).contains(&toks.len()) || (toks.len() == 4 && toks[3] != "Z") {
            return Err(Error::parse(line, 1, "expected `dim birth death` or `dim t t Z`"));
        }
        let dimension: usize = toks[0]
            .parse()
            .map_err(|_| Error::parse(line, 1, format!("invalid dimension `{}`", toks[0])))?;
        let birth = toks[1]
            .parse::<f64>()
            .ok()
            .and_then(Time::new)
            .ok_or_else(|| Error::parse(line, 1, format!("invalid birth `{}`", toks[1])))?;
        let death: Death = toks[2].parse().map_err(|m: String| Error::parse(line, 1, m))?;
        if toks.len() == 4 {
            if death != Death::At(birth) {
                return Err(Error::parse(line, 1, "zero-length record needs birth = death"));
            }
            *diagram.zero_length_count.entry((dimension, birth)).or_insert(0) += 1;
        } else {
            let bar = Bar::new(dimension, birth, death)
                .ok_or_else(|| Error::parse(line, 1, "bar needs birth < death"))?;
            diagram.bars.push(bar);
        }
    }
    diagram.bars.sort();
    Ok(diagram)
}

/// Static persistence diagram. Infinite bars sit on a line above the plot
/// area; zero-length spheres are hollow diamonds on the diagonal.
pub fn write_svg(diagram: &PersistenceDiagram) -> String {
    const SIZE: f64 = 400.0;
    const MARGIN: f64 = 40.0;
    const COLORS: [&str; 4] = ["#1f77b4", "#d62728", "#2ca02c", "#9467bd"];

    let finite_max = diagram
        .bars
        .iter()
        .flat_map(|b| [Some(b.birth), b.death.time()])
        .flatten()
        .chain(diagram.zero_length_count.keys().map(|&(_, t)| t))
        .map(Time::value)
        .fold(0.0f64, f64::max);
    let scale_max = if finite_max > 0.0 { finite_max } else { 1.0 };
    let plot = SIZE - 2.0 * MARGIN;
    let x = |v: f64| MARGIN + v / scale_max * plot;
    let y = |v: f64| SIZE - MARGIN - v / scale_max * plot;
    let inf_y = MARGIN / 2.0;

    let mut out = String::new();
    let _ = writeln!(
        out,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">"#
    );
    let _ = writeln!(out, r#"<rect width="{SIZE}" height="{SIZE}" fill="white"/>"#);
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#999"/>"##,
        x(0.0),
        y(0.0),
        x(scale_max),
        y(scale_max)
    );
    let _ = writeln!(
        out,
        r##"<line x1="{}" y1="{inf_y}" x2="{}" y2="{inf_y}" stroke="#ccc" stroke-dasharray="4"/>"##,
        x(0.0),
        x(scale_max)
    );
    let _ = writeln!(
        out,
        r#"<text x="4" y="{}" font-size="10">inf</text>"#,
        inf_y + 3.0
    );
    for bar in &diagram.bars {
        let color = COLORS[bar.dimension % COLORS.len()];
        let cy = match bar.death {
            Death::At(t) => y(t.value()),
            Death::Never => inf_y,
        };
        let _ = writeln!(
            out,
            r#"<circle cx="{:.2}" cy="{cy:.2}" r="4" fill="{color}"><title>H{} [{}, {})</title></circle>"#,
            x(bar.birth.value()),
            bar.dimension,
            bar.birth,
            bar.death
        );
    }
    for (&(dim, t), &count) in &diagram.zero_length_count {
        let color = COLORS[dim % COLORS.len()];
        let (cx, cy) = (x(t.value()), y(t.value()));
        let _ = writeln!(
            out,
            r#"<path d="M {:.2} {:.2} l 5 5 l -5 5 l -5 -5 z" fill="none" stroke="{color}"><title>I^{dim}[{t}, {t}] x{count}</title></path>"#,
            cx,
            cy - 5.0
        );
    }
    out.push_str("</svg>\n");
    out
}
