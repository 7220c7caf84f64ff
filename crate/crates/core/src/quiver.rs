//! Finite quivers, paths composed left to right, cycles and their rotation
//! orbits.
//!
//! Indices are 0-based here; the JSON forms and user-facing labels are
//! 1-based.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Quiver {
    vertex_count: usize,
    arrows: Vec<(usize, usize)>,
    outgoing: Vec<Vec<usize>>,
}

/// A path `a_1 a_2 ... a_L` traversing `a_1` first. `vertices` has
/// `L + 1` entries; a trivial path has one vertex and no arrows.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Path {
    vertices: Vec<usize>,
    arrows: Vec<usize>,
}

/// Rotation orbit of cycles, represented by its lexicographically least
/// member.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycleOrbit {
    pub representative: Path,
    pub members: Vec<Path>,
}

impl CycleOrbit {
    pub fn size(&self) -> usize {
        self.members.len()
    }
}

impl Quiver {
    pub fn new(vertex_count: usize, arrows: Vec<(usize, usize)>) -> Result<Self> {
        if vertex_count == 0 {
            return Err(Error::EmptyQuiver);
        }
        let mut outgoing = vec![Vec::new(); vertex_count];
        for (k, &(s, t)) in arrows.iter().enumerate() {
            if s >= vertex_count || t >= vertex_count {
                return Err(Error::ArrowOutOfRange { arrow: k + 1, vertex_count });
            }
            outgoing[s].push(k);
        }
        Ok(Self { vertex_count, arrows, outgoing })
    }

    /// Cyclic quiver with arrow `x_i : i → i+1` (mod `s`).
    pub fn cyclic(s: usize) -> Result<Self> {
        if s == 0 {
            return Err(Error::EmptyQuiver);
        }
        Self::new(s, (0..s).map(|i| (i, (i + 1) % s)).collect())
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn arrow_count(&self) -> usize {
        self.arrows.len()
    }

    pub fn arrow(&self, k: usize) -> (usize, usize) {
        self.arrows[k]
    }

    pub fn arrows(&self) -> &[(usize, usize)] {
        &self.arrows
    }

    pub fn trivial_path(&self, v: usize) -> Path {
        assert!(v < self.vertex_count, "vertex out of range");
        Path { vertices: vec![v], arrows: Vec::new() }
    }

    pub fn arrow_path(&self, k: usize) -> Path {
        let (s, t) = self.arrows[k];
        Path { vertices: vec![s, t], arrows: vec![k] }
    }

    /// The path through the given arrows; rejects empty or non-composable input.
    pub fn path(&self, arrows: &[usize]) -> Result<Path> {
        let first = *arrows.first().ok_or(Error::ZeroLength)?;
        if first >= self.arrows.len() {
            return Err(Error::UnknownArrow(first));
        }
        let mut vertices = vec![self.arrows[first].0];
        for (k, &a) in arrows.iter().enumerate() {
            let &(s, t) = self.arrows.get(a).ok_or(Error::UnknownArrow(a))?;
            if s != *vertices.last().unwrap() {
                return Err(Error::NotComposable(arrows[k - 1], a));
            }
            vertices.push(t);
        }
        Ok(Path { vertices, arrows: arrows.to_vec() })
    }

    pub fn paths_of_length(&self, len: usize) -> Vec<Path> {
        let mut layer: Vec<Path> = (0..self.vertex_count).map(|v| self.trivial_path(v)).collect();
        for _ in 0..len {
            let mut next = Vec::new();
            for p in &layer {
                for &a in &self.outgoing[p.target()] {
                    let mut q = p.clone();
                    q.arrows.push(a);
                    q.vertices.push(self.arrows[a].1);
                    next.push(q);
                }
            }
            layer = next;
        }
        layer.sort();
        layer
    }

    pub fn cycles(&self, len: usize) -> Vec<Path> {
        if len == 0 {
            return Vec::new();
        }
        self.paths_of_length(len).into_iter().filter(Path::is_cycle).collect()
    }

    /// `a_q`: the number of rotation orbits of cycles of length `q`.
    pub fn cycle_orbit_count(&self, q: usize) -> usize {
        orbit_decomposition(&self.cycles(q)).map_or(0, |o| o.len())
    }

    /// `b_r`: the number of rotation orbits of basic cycles of length `r`.
    pub fn basic_orbit_count(&self, r: usize) -> usize {
        let basic: Vec<Path> =
            self.cycles(r).into_iter().filter(|c| is_basic(c).unwrap_or(false)).collect();
        orbit_decomposition(&basic).map_or(0, |o| o.len())
    }

    pub fn to_json(&self) -> QuiverJson {
        QuiverJson {
            vertices: self.vertex_count,
            arrows: self.arrows.iter().map(|&(s, t)| [s + 1, t + 1]).collect(),
        }
    }

    pub fn from_json(json: &QuiverJson) -> Result<Self> {
        let arrows = json
            .arrows
            .iter()
            .enumerate()
            .map(|(k, &[s, t])| {
                if s == 0 || t == 0 {
                    Err(Error::ArrowOutOfRange { arrow: k + 1, vertex_count: json.vertices })
                } else {
                    Ok((s - 1, t - 1))
                }
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(json.vertices, arrows)
    }

    /// Serialized path with 1-based labels.
    pub fn path_json(&self, p: &Path) -> PathJson {
        PathJson { source: p.source() + 1, arrows: p.arrows.iter().map(|a| a + 1).collect() }
    }

    pub fn path_from_json(&self, json: &PathJson) -> Result<Path> {
        if json.arrows.is_empty() {
            if json.source == 0 || json.source > self.vertex_count {
                return Err(Error::VertexOutOfRange { vertex: json.source, vertex_count: self.vertex_count });
            }
            return Ok(self.trivial_path(json.source - 1));
        }
        let arrows: Vec<usize> = json
            .arrows
            .iter()
            .map(|&a| a.checked_sub(1).ok_or(Error::UnknownArrow(0)))
            .collect::<Result<_>>()?;
        let p = self.path(&arrows)?;
        if p.source() + 1 != json.source {
            return Err(Error::Invalid(format!("path source {} does not match its first arrow", json.source)));
        }
        Ok(p)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct QuiverJson {
    pub vertices: usize,
    pub arrows: Vec<[usize; 2]>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PathJson {
    pub source: usize,
    pub arrows: Vec<usize>,
}

impl Path {
    pub fn len(&self) -> usize {
        self.arrows.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.arrows.is_empty()
    }

    pub fn source(&self) -> usize {
        self.vertices[0]
    }

    pub fn target(&self) -> usize {
        *self.vertices.last().unwrap()
    }

    pub fn arrows(&self) -> &[usize] {
        &self.arrows
    }

    pub fn vertices(&self) -> &[usize] {
        &self.vertices
    }

    /// Cycles have positive length and equal endpoints.
    pub fn is_cycle(&self) -> bool {
        !self.arrows.is_empty() && self.source() == self.target()
    }

    /// Concatenation in the path algebra, `None` if not composable.
    pub fn concat(&self, other: &Path) -> Option<Path> {
        if self.target() != other.source() {
            return None;
        }
        let mut vertices = self.vertices.clone();
        vertices.extend_from_slice(&other.vertices[1..]);
        let mut arrows = self.arrows.clone();
        arrows.extend_from_slice(&other.arrows);
        Some(Path { vertices, arrows })
    }

    /// Arrows `start..end`; an empty range gives the trivial path at the
    /// vertex reached after `start` arrows.
    pub fn subpath(&self, start: usize, end: usize) -> Path {
        assert!(start <= end && end <= self.len(), "subpath range out of bounds");
        Path { vertices: self.vertices[start..=end].to_vec(), arrows: self.arrows[start..end].to_vec() }
    }

    /// `c(a_1 ⋯ a_q) = a_q a_1 ⋯ a_{q-1}`.
    pub fn rotate(&self) -> Path {
        assert!(self.is_cycle(), "only cycles rotate");
        self.rotate_to(self.len() - 1)
    }

    /// The rotation of a cycle starting at arrow position `k`.
    pub fn rotate_to(&self, k: usize) -> Path {
        assert!(self.is_cycle(), "only cycles rotate");
        let q = self.len();
        let k = k % q;
        let arrows: Vec<usize> = (0..q).map(|t| self.arrows[(k + t) % q]).collect();
        let mut vertices: Vec<usize> = (0..q).map(|t| self.vertices[(k + t) % q]).collect();
        vertices.push(vertices[0]);
        Path { vertices, arrows }
    }

    pub fn least_rotation(&self) -> Path {
        (0..self.len()).map(|k| self.rotate_to(k)).min().expect("cycle has positive length")
    }

    pub fn label(&self) -> String {
        if self.is_trivial() {
            format!("e{}", self.source() + 1)
        } else {
            self.arrows.iter().map(|a| format!("x{}", a + 1)).collect::<Vec<_>>().join("")
        }
    }
}

impl Ord for Path {
    fn cmp(&self, other: &Self) -> Ordering {
        self.len()
            .cmp(&other.len())
            .then_with(|| self.arrows.cmp(&other.arrows))
            .then_with(|| self.vertices.cmp(&other.vertices))
    }
}

impl PartialOrd for Path {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Path {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.label())
    }
}

pub fn cyclic_quiver(s: usize) -> Result<Quiver> {
    Quiver::cyclic(s)
}

/// Partitions equal-length cycles into rotation orbits, sorted by
/// representative. Members keep the input's distinct cycles in order.
pub fn orbit_decomposition(cycles: &[Path]) -> Result<Vec<CycleOrbit>> {
    let Some(first) = cycles.first() else {
        return Ok(Vec::new());
    };
    let len = first.len();
    let mut orbits: BTreeMap<Path, Vec<Path>> = BTreeMap::new();
    for c in cycles {
        if !c.is_cycle() {
            return Err(Error::NotACycle);
        }
        if c.len() != len {
            return Err(Error::MixedCycleLengths);
        }
        let members = orbits.entry(c.least_rotation()).or_default();
        if !members.contains(c) {
            members.push(c.clone());
        }
    }
    Ok(orbits.into_iter().map(|(representative, members)| CycleOrbit { representative, members }).collect())
}

/// Whether a cycle is not a proper power of a shorter cycle.
pub fn is_basic(c: &Path) -> Result<bool> {
    if !c.is_cycle() {
        return Err(Error::NotACycle);
    }
    let q = c.len();
    Ok(!(1..q).filter(|d| q % d == 0).any(|d| (0..q).all(|t| c.arrows[t] == c.arrows[t % d])))
}
