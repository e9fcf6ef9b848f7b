//! Filtered kernel of a simplicial map `f: K -> L` that has a section `s`.
//!
//! The chains `σ - s f(σ)` for the simplices σ of K outside the image of `s`
//! form a basis of `ker f` at every filtration value. Their boundaries are
//! again combinations of such chains, so the kernel is a filtered chain
//! complex that [`crate::decomposition`] can decompose directly.

use std::collections::{HashMap, HashSet};

use crate::complex::{FilteredChainComplexInput, Generator, GeneratorLabel};
use crate::decomposition::{decompose, Decomposition, Strategy};
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::rips::FilteredSimplicialComplex;

/// Vertex maps `f: K -> L` and `s: L -> K`, validated against both complexes.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicialMapWithSection {
    vertex_map: Vec<usize>,
    section: Vec<usize>,
}

/// Sorted image of `vertices` and the sign of the sorting permutation, or
/// `None` when two vertices collide.
fn image_of(map: &[usize], vertices: &[usize]) -> Option<(Vec<usize>, i64)> {
    let image: Vec<usize> = vertices.iter().map(|&v| map[v]).collect();
    let mut inversions = 0usize;
    for a in 0..image.len() {
        for b in a + 1..image.len() {
            match image[a].cmp(&image[b]) {
                std::cmp::Ordering::Equal => return None,
                std::cmp::Ordering::Greater => inversions += 1,
                std::cmp::Ordering::Less => {}
            }
        }
    }
    let mut sorted = image;
    sorted.sort_unstable();
    Some((sorted, if inversions.is_multiple_of(2) { 1 } else { -1 }))
}

impl SimplicialMapWithSection {
    pub fn new(
        k: &FilteredSimplicialComplex,
        l: &FilteredSimplicialComplex,
        vertex_map: Vec<usize>,
        section: Vec<usize>,
    ) -> Result<Self> {
        let (nk, nl) = (k.vertex_names().len(), l.vertex_names().len());
        if vertex_map.len() != nk || vertex_map.iter().any(|&w| w >= nl) {
            return Err(Error::InvalidMap(format!(
                "vertex map must send each of the {nk} vertices of K into L"
            )));
        }
        if section.len() != nl || section.iter().any(|&v| v >= nk) {
            return Err(Error::InvalidMap(format!(
                "section must send each of the {nl} vertices of L into K"
            )));
        }
        if let Some(w) = (0..nl).find(|&w| vertex_map[section[w]] != w) {
            return Err(Error::InvalidMap(format!(
                "f(s({})) != {}",
                l.vertex_names()[w],
                l.vertex_names()[w]
            )));
        }
        let map = SimplicialMapWithSection {
            vertex_map,
            section,
        };

        let mut hit = vec![false; l.len()];
        for (idx, sigma) in k.simplices().iter().enumerate() {
            let mut image: Vec<usize> = sigma.vertices.iter().map(|&v| map.vertex_map[v]).collect();
            image.sort_unstable();
            image.dedup();
            let tau = l.index_of(&image).ok_or_else(|| {
                Error::InvalidMap(format!("image of {} is not a simplex of L", k.simplex_id(idx)))
            })?;
            if l.simplices()[tau].entrance > sigma.entrance {
                return Err(Error::InvalidMap(format!(
                    "{} enters before its image {}",
                    k.simplex_id(idx),
                    l.simplex_id(tau)
                )));
            }
            hit[tau] = true;
        }
        if let Some(tau) = hit.iter().position(|h| !h) {
            return Err(Error::InvalidMap(format!(
                "f is not onto: {} has no preimage",
                l.simplex_id(tau)
            )));
        }
        for (idx, tau) in l.simplices().iter().enumerate() {
            let (image, _) = image_of(&map.section, &tau.vertices).expect("s is injective");
            let sigma = k.index_of(&image).ok_or_else(|| {
                Error::InvalidMap(format!("section image of {} is not a simplex of K", l.simplex_id(idx)))
            })?;
            if k.simplices()[sigma].entrance != tau.entrance {
                return Err(Error::InvalidMap(format!(
                    "section changes the entrance of {}",
                    l.simplex_id(idx)
                )));
            }
        }
        Ok(map)
    }

    /// Builds the maps from vertex names.
    pub fn from_names(
        k: &FilteredSimplicialComplex,
        l: &FilteredSimplicialComplex,
        vertex_map: &[(String, String)],
        section: &[(String, String)],
    ) -> Result<Self> {
        let resolve = |pairs: &[(String, String)], from: &FilteredSimplicialComplex, to: &FilteredSimplicialComplex, what: &str| {
            let mut out = vec![None; from.vertex_names().len()];
            for (a, b) in pairs {
                let src = from
                    .vertex_index(a)
                    .ok_or_else(|| Error::InvalidMap(format!("{what}: unknown vertex `{a}`")))?;
                let dst = to
                    .vertex_index(b)
                    .ok_or_else(|| Error::InvalidMap(format!("{what}: unknown vertex `{b}`")))?;
                if out[src].replace(dst).is_some() {
                    return Err(Error::InvalidMap(format!("{what}: `{a}` is mapped twice")));
                }
            }
            out.iter()
                .enumerate()
                .map(|(v, d)| {
                    d.ok_or_else(|| {
                        Error::InvalidMap(format!("{what}: no image for `{}`", from.vertex_names()[v]))
                    })
                })
                .collect::<Result<Vec<usize>>>()
        };
        let f = resolve(vertex_map, k, l, "vertex_map")?;
        let s = resolve(section, l, k, "section")?;
        Self::new(k, l, f, s)
    }

    pub fn vertex_map(&self) -> &[usize] {
        &self.vertex_map
    }

    pub fn section(&self) -> &[usize] {
        &self.section
    }
}

/// `f(σ)` as a chain on L: the image simplex with the sign of the vertex
/// reordering, or zero when the dimension drops.
pub fn chain_map_of(
    k: &FilteredSimplicialComplex,
    l: &FilteredSimplicialComplex,
    vertex_map: &[usize],
    sigma: usize,
) -> Result<Vec<(usize, i64)>> {
    let vertices = &k.simplices()[sigma].vertices;
    if let Some(&v) = vertices.iter().find(|&&v| v >= vertex_map.len()) {
        return Err(Error::InvalidMap(format!("vertex {v} has no image")));
    }
    let Some((image, sign)) = image_of(vertex_map, vertices) else {
        let mut collapsed: Vec<usize> = vertices.iter().map(|&v| vertex_map[v]).collect();
        collapsed.sort_unstable();
        collapsed.dedup();
        return match l.index_of(&collapsed) {
            Some(_) => Ok(Vec::new()),
            None => Err(Error::InvalidMap(format!(
                "image of {} is not a simplex of L",
                k.simplex_id(sigma)
            ))),
        };
    };
    let tau = l.index_of(&image).ok_or_else(|| {
        Error::InvalidMap(format!("image of {} is not a simplex of L", k.simplex_id(sigma)))
    })?;
    Ok(vec![(tau, sign)])
}

#[derive(Debug, Clone, PartialEq)]
pub struct KernelGenerator {
    /// Index of σ in K.
    pub sigma: usize,
    /// `σ - s f(σ)` over the simplices of K.
    pub chain: Vec<(usize, i64)>,
    pub label: GeneratorLabel,
}

fn section_image(k: &FilteredSimplicialComplex, l: &FilteredSimplicialComplex, fs: &SimplicialMapWithSection) -> HashSet<usize> {
    l.simplices()
        .iter()
        .filter_map(|tau| image_of(fs.section(), &tau.vertices).and_then(|(img, _)| k.index_of(&img)))
        .collect()
}

/// One generator per simplex of K outside the image of the section, in K's order.
pub fn kernel_generators(
    k: &FilteredSimplicialComplex,
    l: &FilteredSimplicialComplex,
    fs: &SimplicialMapWithSection,
) -> Result<Vec<KernelGenerator>> {
    let in_image = section_image(k, l, fs);
    let mut out = Vec::new();
    for (sigma, simplex) in k.simplices().iter().enumerate() {
        if in_image.contains(&sigma) {
            continue;
        }
        let mut chain = vec![(sigma, 1)];
        for (tau, sign_f) in chain_map_of(k, l, fs.vertex_map(), sigma)? {
            let (image, sign_s) = image_of(fs.section(), &l.simplices()[tau].vertices)
                .expect("s is injective");
            let back = k.index_of(&image).expect("validated section");
            chain.push((back, -sign_f * sign_s));
        }
        out.push(KernelGenerator {
            sigma,
            chain,
            label: GeneratorLabel::new(simplex.dimension(), simplex.entrance),
        });
    }
    Ok(out)
}

/// Boundary matrix of the kernel in the basis `gens`.
///
/// The boundary of `σ - s f(σ)` is the signed sum of `τ - s f(τ)` over the
/// facets τ of σ; terms with τ in the image of `s` vanish.
pub fn kernel_boundary(k: &FilteredSimplicialComplex, gens: &[KernelGenerator]) -> FilteredChainComplexInput {
    let position: HashMap<usize, usize> = gens.iter().enumerate().map(|(p, g)| (g.sigma, p)).collect();
    let generators = gens
        .iter()
        .map(|g| Generator {
            id: k.simplex_id(g.sigma),
            label: g.label,
            boundary: k
                .boundary(g.sigma)
                .into_iter()
                .filter_map(|(tau, sign)| position.get(&tau).map(|&p| (p, sign)))
                .collect(),
        })
        .collect();
    FilteredChainComplexInput::new(generators)
}

/// Kernel generators and boundary in one step.
pub fn kernel_complex(
    k: &FilteredSimplicialComplex,
    l: &FilteredSimplicialComplex,
    fs: &SimplicialMapWithSection,
) -> Result<FilteredChainComplexInput> {
    Ok(kernel_boundary(k, &kernel_generators(k, l, fs)?))
}

pub fn decompose_kernel(
    k: &FilteredSimplicialComplex,
    l: &FilteredSimplicialComplex,
    fs: &SimplicialMapWithSection,
    field: FieldSpec,
    strategy: Strategy,
) -> Result<Decomposition> {
    decompose(&kernel_complex(k, l, fs)?, field, strategy)
}

/// Parses a map file with a `vertex_map` and a `section` block of
/// `from -> to` lines.
pub fn parse_map_file(
    text: &str,
    k: &FilteredSimplicialComplex,
    l: &FilteredSimplicialComplex,
) -> Result<SimplicialMapWithSection> {
    #[derive(PartialEq)]
    enum Block {
        None,
        VertexMap,
        Section,
    }
    let mut block = Block::None;
    let mut vertex_map = Vec::new();
    let mut section = Vec::new();
    let mut seen = (false, false);
    for (ln, raw) in text.lines().enumerate() {
        let line = ln + 1;
        let content = raw.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        match content {
            "vertex_map" => {
                block = Block::VertexMap;
                seen.0 = true;
                continue;
            }
            "section" => {
                block = Block::Section;
                seen.1 = true;
                continue;
            }
            _ => {}
        }
        let indent = raw.len() - raw.trim_start().len();
        let (from, to) = content
            .split_once("->")
            .map(|(a, b)| (a.trim(), b.trim()))
            .filter(|(a, b)| !a.is_empty() && !b.is_empty() && !b.contains(char::is_whitespace))
            .ok_or_else(|| Error::parse(line, indent + 1, "expected `from -> to`"))?;
        let pair = (from.to_string(), to.to_string());
        match block {
            Block::VertexMap => vertex_map.push(pair),
            Block::Section => section.push(pair),
            Block::None => {
                return Err(Error::parse(line, indent + 1, "mapping outside a `vertex_map` or `section` block"))
            }
        }
    }
    if !(seen.0 && seen.1) {
        return Err(Error::parse(1, 1, "map file needs `vertex_map` and `section` blocks"));
    }
    SimplicialMapWithSection::from_names(k, l, &vertex_map, &section)
}
