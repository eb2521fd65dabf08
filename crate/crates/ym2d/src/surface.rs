//! Combinatorial oriented surfaces: polygons with edge identifications,
//! derived topological invariants, and the boundary splitting/merging moves.
//!
//! A surface is a list of polygons (cyclic edge words) plus a fixed-point-free
//! involution pairing some edge slots. Pairings must be orientation-reversing
//! after a consistent choice of polygon orientations; non-orientable inputs
//! are rejected. Unpaired slots form boundary circles, partitioned into arcs
//! carrying an A/B polarization with polarized corners between them. Area is
//! attached per polygon; downstream code only ever reads the total.

use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SurfaceError {
    #[error("edge label `{0}` appears more than twice")]
    DanglingPairing(String),
    #[error("gluing is non-orientable")]
    NonOrientable,
    #[error("surface is not connected")]
    Disconnected,
    #[error("polarizations incompatible with the move: {0}")]
    IncompatiblePolarizations(String),
    #[error("no such {0}")]
    BadIndex(&'static str),
    #[error("cannot parse gluing word: {0}")]
    Parse(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum ArcPolarization {
    A,
    B,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
pub enum CornerPolarization {
    Alpha,
    Beta,
}

/// Global edge-slot id: polygons laid out consecutively, directed along the
/// polygon orientation.
pub type SlotId = usize;

#[derive(Debug, Clone)]
pub struct BoundaryArc {
    /// Consecutive boundary slots along the circle.
    pub slots: Vec<SlotId>,
    pub polarization: ArcPolarization,
    pub label: String,
    /// Polarization of the corner between this arc and the next one.
    pub corner_after: CornerPolarization,
}

#[derive(Debug, Clone)]
pub struct BoundaryCircle {
    pub arcs: Vec<BoundaryArc>,
}

/// Identifies a corner as (circle index, index of the arc it follows).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct CornerRef {
    pub circle: usize,
    pub after_arc: usize,
}

/// Polygon-gluing presentation of an oriented surface with decorated boundary.
#[derive(Debug, Clone)]
pub struct CellSurface {
    /// Number of sides of each polygon.
    polygon_sides: Vec<usize>,
    /// Area attached to each polygon.
    areas: Vec<f64>,
    /// Slot pairing (global indices); `None` for boundary slots.
    pairing: Vec<Option<SlotId>>,
    /// Labels per slot, for display and the CLI decoration maps.
    labels: Vec<String>,
    /// Derived boundary structure with polarization decoration.
    boundary: Vec<BoundaryCircle>,
}

/// Summary of a surface: genus, decorated boundary circles, total area.
#[derive(Debug, Clone)]
pub struct SurfaceSpec {
    pub genus: u32,
    pub boundaries: Vec<BoundaryInfo>,
    pub total_area: f64,
}

#[derive(Debug, Clone)]
pub struct BoundaryInfo {
    /// Uniform polarization of the circle, `None` when arcs disagree.
    pub polarization: Option<ArcPolarization>,
    /// Prescribed holonomy class angle for A-circles, if any.
    pub holonomy_angle: Option<f64>,
}

impl SurfaceSpec {
    pub fn closed(genus: u32, total_area: f64) -> Self {
        Self { genus, boundaries: Vec::new(), total_area }
    }

    /// Genus-g surface with `b` A-polarized boundary circles.
    pub fn with_boundaries(genus: u32, b: usize, total_area: f64) -> Self {
        Self {
            genus,
            boundaries: vec![
                BoundaryInfo {
                    polarization: Some(ArcPolarization::A),
                    holonomy_angle: None
                };
                b
            ],
            total_area,
        }
    }

    pub fn euler_characteristic(&self) -> i64 {
        2 - 2 * self.genus as i64 - self.boundaries.len() as i64
    }
}

struct ParsedLetter {
    label: String,
    inverted: bool,
}

fn parse_word(word: &str) -> Result<Vec<ParsedLetter>, SurfaceError> {
    let mut letters = Vec::new();
    let chars: Vec<char> = word.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if !c.is_ascii_alphabetic() {
            return Err(SurfaceError::Parse(format!("unexpected character `{c}`")));
        }
        let label = c.to_string();
        i += 1;
        let mut inverted = false;
        if i < chars.len() && chars[i] == '\'' {
            inverted = true;
            i += 1;
        } else if i + 2 < chars.len() && chars[i] == '^' && chars[i + 1] == '-' && chars[i + 2] == '1'
        {
            inverted = true;
            i += 3;
        }
        letters.push(ParsedLetter { label, inverted });
    }
    if letters.is_empty() {
        return Err(SurfaceError::Parse("empty polygon word".into()));
    }
    Ok(letters)
}

impl CellSurface {
    /// Builds a surface from gluing words, one per polygon. A letter appearing
    /// twice is an identified edge pair (`a ... a'` or `a ... a^-1` is the
    /// orientation-compatible identification); a letter appearing once is a
    /// boundary arc. Boundary arcs default to A-polarization with
    /// alpha-corners.
    pub fn from_words(words: &[&str], areas: &[f64]) -> Result<Self, SurfaceError> {
        assert_eq!(words.len(), areas.len(), "one area per polygon");
        let mut polygon_sides = Vec::new();
        let mut labels = Vec::new();
        let mut inverted = Vec::new();
        for word in words {
            let letters = parse_word(word)?;
            polygon_sides.push(letters.len());
            for l in letters {
                labels.push(l.label);
                inverted.push(l.inverted);
            }
        }
        let mut occurrences: HashMap<String, Vec<usize>> = HashMap::new();
        for (slot, label) in labels.iter().enumerate() {
            occurrences.entry(label.clone()).or_default().push(slot);
        }
        let mut pairing = vec![None; labels.len()];
        let mut same_direction = vec![false; labels.len()];
        for (label, slots) in &occurrences {
            match slots.len() {
                1 => {}
                2 => {
                    pairing[slots[0]] = Some(slots[1]);
                    pairing[slots[1]] = Some(slots[0]);
                    let same = inverted[slots[0]] == inverted[slots[1]];
                    same_direction[slots[0]] = same;
                    same_direction[slots[1]] = same;
                }
                _ => return Err(SurfaceError::DanglingPairing(label.clone())),
            }
        }
        Self::build(polygon_sides, areas.to_vec(), pairing, same_direction, labels)
    }

    /// Core constructor: checks the involution, orientability (flipping
    /// polygons so every identification is orientation-reversing) and
    /// connectivity, then derives the boundary structure.
    fn build(
        polygon_sides: Vec<usize>,
        areas: Vec<f64>,
        mut pairing: Vec<Option<SlotId>>,
        mut same_direction: Vec<bool>,
        mut labels: Vec<String>,
    ) -> Result<Self, SurfaceError> {
        let n_poly = polygon_sides.len();
        let offsets = slot_offsets(&polygon_sides);
        let polygon_of = |slot: usize| -> usize { offsets.partition_point(|&o| o <= slot) - 1 };
        for (s, p) in pairing.iter().enumerate() {
            if let Some(t) = *p {
                if t == s || pairing[t] != Some(s) {
                    return Err(SurfaceError::DanglingPairing(labels[s].clone()));
                }
            }
        }
        // 2-color polygons: a same-direction pairing demands opposite colors
        let mut color: Vec<Option<bool>> = vec![None; n_poly];
        let mut components = 0;
        for start in 0..n_poly {
            if color[start].is_some() {
                continue;
            }
            components += 1;
            if components > 1 {
                return Err(SurfaceError::Disconnected);
            }
            color[start] = Some(false);
            let mut stack = vec![start];
            while let Some(p) = stack.pop() {
                let cp = color[p].unwrap();
                for s in offsets[p]..offsets[p] + polygon_sides[p] {
                    if let Some(t) = pairing[s] {
                        let q = polygon_of(t);
                        let want = cp ^ same_direction[s];
                        match color[q] {
                            None => {
                                color[q] = Some(want);
                                stack.push(q);
                            }
                            Some(cq) if cq != want => return Err(SurfaceError::NonOrientable),
                            _ => {}
                        }
                    }
                }
            }
        }
        // flip polygons colored `true` (reverse their side order)
        if color.iter().any(|c| *c == Some(true)) {
            let mut remap = vec![0usize; pairing.len()];
            for p in 0..n_poly {
                let n = polygon_sides[p];
                for i in 0..n {
                    let s = offsets[p] + i;
                    remap[s] = if color[p] == Some(true) { offsets[p] + (n - 1 - i) } else { s };
                }
            }
            let len = pairing.len();
            let mut new_pairing = vec![None; len];
            let mut new_same = vec![false; len];
            let mut new_labels = vec![String::new(); len];
            for s in 0..len {
                let ns = remap[s];
                new_pairing[ns] = pairing[s].map(|t| remap[t]);
                let flipped_here = color[polygon_of(s)] == Some(true);
                let flipped_there = pairing[s]
                    .map(|t| color[polygon_of(t)] == Some(true))
                    .unwrap_or(false);
                new_same[ns] = same_direction[s] ^ flipped_here ^ flipped_there;
                new_labels[ns] = std::mem::take(&mut labels[s]);
            }
            pairing = new_pairing;
            same_direction = new_same;
            labels = new_labels;
        }
        debug_assert!(pairing
            .iter()
            .enumerate()
            .all(|(s, p)| p.is_none() || !same_direction[s]));
        let mut surface = Self {
            polygon_sides,
            areas,
            pairing,
            labels,
            boundary: Vec::new(),
        };
        surface.boundary = surface.trace_boundary_default();
        Ok(surface)
    }

    fn offsets(&self) -> Vec<usize> {
        slot_offsets(&self.polygon_sides)
    }

    fn polygon_of(&self, slot: SlotId) -> usize {
        self.offsets().partition_point(|&o| o <= slot) - 1
    }

    fn n_slots(&self) -> usize {
        self.polygon_sides.iter().sum()
    }

    /// Side following `slot` in its polygon (cyclically). Also indexes the
    /// corner at which `slot` ends.
    fn next_in_polygon(&self, slot: SlotId) -> SlotId {
        let p = self.polygon_of(slot);
        let off = self.offsets()[p];
        let n = self.polygon_sides[p];
        off + (slot - off + 1) % n
    }

    /// Next boundary slot along the boundary circle after `slot`: walk around
    /// the end vertex through glued sides until the next unpaired side.
    fn next_boundary(&self, slot: SlotId) -> SlotId {
        let mut t = self.next_in_polygon(slot);
        while let Some(tp) = self.pairing[t] {
            t = self.next_in_polygon(tp);
        }
        t
    }

    fn boundary_slots(&self) -> Vec<SlotId> {
        (0..self.n_slots()).filter(|&s| self.pairing[s].is_none()).collect()
    }

    fn trace_boundary_default(&self) -> Vec<BoundaryCircle> {
        let mut seen = vec![false; self.n_slots()];
        let mut circles = Vec::new();
        for s in self.boundary_slots() {
            if seen[s] {
                continue;
            }
            let mut cycle = Vec::new();
            let mut t = s;
            loop {
                seen[t] = true;
                cycle.push(t);
                t = self.next_boundary(t);
                if t == s {
                    break;
                }
            }
            let arcs = cycle
                .into_iter()
                .map(|slot| BoundaryArc {
                    slots: vec![slot],
                    polarization: ArcPolarization::A,
                    label: self.labels[slot].clone(),
                    corner_after: CornerPolarization::Alpha,
                })
                .collect();
            circles.push(BoundaryCircle { arcs });
        }
        circles
    }

    pub fn boundary(&self) -> &[BoundaryCircle] {
        &self.boundary
    }

    pub fn total_area(&self) -> f64 {
        self.areas.iter().sum()
    }

    pub fn polygon_areas(&self) -> &[f64] {
        &self.areas
    }

    pub fn label_of_slot(&self, slot: SlotId) -> &str {
        &self.labels[slot]
    }

    /// Pairs of identified slots (each pair listed once, lower id first).
    pub fn glued_pairs(&self) -> Vec<(SlotId, SlotId)> {
        let mut pairs = Vec::new();
        for (s, p) in self.pairing.iter().enumerate() {
            if let Some(t) = *p {
                if s < t {
                    pairs.push((s, t));
                }
            }
        }
        pairs
    }

    /// Polygon index and in-polygon position of a slot.
    pub fn locate(&self, slot: SlotId) -> (usize, usize) {
        let p = self.polygon_of(slot);
        (p, slot - self.offsets()[p])
    }

    pub fn polygon_len(&self, polygon: usize) -> usize {
        self.polygon_sides[polygon]
    }

    pub fn n_polygons(&self) -> usize {
        self.polygon_sides.len()
    }

    /// Sets the polarization of every arc matching `label`.
    pub fn set_arc_polarization(&mut self, label: &str, pol: ArcPolarization) {
        for circle in &mut self.boundary {
            for arc in &mut circle.arcs {
                if arc.label == label {
                    arc.polarization = pol;
                }
            }
        }
    }

    pub fn set_corner_polarization(&mut self, corner: CornerRef, pol: CornerPolarization) {
        self.boundary[corner.circle].arcs[corner.after_arc].corner_after = pol;
    }

    /// Euler characteristic V - E + F of the identified complex.
    pub fn euler_characteristic(&self) -> i64 {
        let n = self.n_slots();
        // corner i of a polygon = start of its side i; global index of the
        // corner equals the slot index of the side it starts
        let mut uf = UnionFind::new(n);
        for (s, t) in self.glued_pairs() {
            // orientation-reversing: start(s) ~ end(t), end(s) ~ start(t)
            uf.union(s, self.next_in_polygon(t));
            uf.union(self.next_in_polygon(s), t);
        }
        let v = uf.count_roots() as i64;
        let e = (self.glued_pairs().len() + self.boundary_slots().len()) as i64;
        let f = self.polygon_sides.len() as i64;
        v - e + f
    }

    /// Derives the summary spec: genus from the Euler characteristic and
    /// boundary count, circle polarizations, total area.
    pub fn derive_spec(&self) -> Result<SurfaceSpec, SurfaceError> {
        let chi = self.euler_characteristic();
        let b = self.boundary.len() as i64;
        let two_g = 2 - chi - b;
        if two_g < 0 || two_g % 2 != 0 {
            return Err(SurfaceError::NonOrientable);
        }
        let boundaries = self
            .boundary
            .iter()
            .map(|circle| {
                let first = circle.arcs[0].polarization;
                let uniform = circle.arcs.iter().all(|a| a.polarization == first);
                BoundaryInfo { polarization: uniform.then_some(first), holonomy_angle: None }
            })
            .collect();
        Ok(SurfaceSpec {
            genus: (two_g / 2) as u32,
            boundaries,
            total_area: self.total_area(),
        })
    }

    fn corner_pair(&self, corner: CornerRef) -> Result<(usize, usize, usize), SurfaceError> {
        let circle = self
            .boundary
            .get(corner.circle)
            .ok_or(SurfaceError::BadIndex("boundary circle"))?;
        if corner.after_arc >= circle.arcs.len() {
            return Err(SurfaceError::BadIndex("corner"));
        }
        let next = (corner.after_arc + 1) % circle.arcs.len();
        Ok((corner.circle, corner.after_arc, next))
    }

    /// Move (a): splits an arc into `k` arcs of the same polarization,
    /// separated by matching corners (alpha for A-arcs, beta for B-arcs).
    /// Subdivides the underlying polygon side when the arc has fewer than `k`
    /// slots; topology is unchanged either way.
    pub fn split_arc(
        &self,
        circle: usize,
        arc_idx: usize,
        k: usize,
    ) -> Result<CellSurface, SurfaceError> {
        if k < 2 {
            return Err(SurfaceError::IncompatiblePolarizations("split requires k >= 2".into()));
        }
        let mut out = self.clone();
        let arc = out
            .boundary
            .get(circle)
            .and_then(|c| c.arcs.get(arc_idx))
            .ok_or(SurfaceError::BadIndex("arc"))?
            .clone();
        let mut slots = arc.slots.clone();
        if slots.len() < k {
            let extra = k - slots.len();
            let new_slots = out.subdivide_slot(slots[0], extra + 1);
            slots = new_slots.into_iter().chain(slots.into_iter().skip(1)).collect();
        }
        let matching = match arc.polarization {
            ArcPolarization::A => CornerPolarization::Alpha,
            ArcPolarization::B => CornerPolarization::Beta,
        };
        let base = slots.len() / k;
        let rem = slots.len() % k;
        let mut it = slots.into_iter();
        let mut new_arcs = Vec::with_capacity(k);
        for g in 0..k {
            let take = base + usize::from(g < rem);
            let group: Vec<_> = (&mut it).take(take).collect();
            new_arcs.push(BoundaryArc {
                slots: group,
                polarization: arc.polarization,
                label: format!("{}{}", arc.label, g + 1),
                corner_after: if g + 1 == k { arc.corner_after } else { matching },
            });
        }
        out.boundary[circle].arcs.splice(arc_idx..=arc_idx, new_arcs);
        Ok(out)
    }

    /// Move (b): merges the two arcs meeting at `corner`; requires equal arc
    /// polarizations and a corner polarization matching them.
    pub fn merge_arcs(&self, corner: CornerRef) -> Result<CellSurface, SurfaceError> {
        let (ci, i, j) = self.corner_pair(corner)?;
        if i == j {
            return Err(SurfaceError::IncompatiblePolarizations(
                "cannot merge an arc with itself".into(),
            ));
        }
        let circle = &self.boundary[ci];
        let (a, b) = (&circle.arcs[i], &circle.arcs[j]);
        let matching = match a.polarization {
            ArcPolarization::A => CornerPolarization::Alpha,
            ArcPolarization::B => CornerPolarization::Beta,
        };
        if a.polarization != b.polarization || a.corner_after != matching {
            return Err(SurfaceError::IncompatiblePolarizations(format!(
                "merge needs equal arc polarizations with a matching corner, got {:?}/{:?} at {:?}",
                a.polarization, b.polarization, a.corner_after
            )));
        }
        Ok(self.remove_corner(ci, i, j))
    }

    /// Move (c): switches the polarization of a corner separating an A-arc
    /// from a B-arc.
    pub fn switch_corner(&self, corner: CornerRef) -> Result<CellSurface, SurfaceError> {
        let (ci, i, j) = self.corner_pair(corner)?;
        let circle = &self.boundary[ci];
        if circle.arcs[i].polarization == circle.arcs[j].polarization {
            return Err(SurfaceError::IncompatiblePolarizations(
                "switch requires an A-arc and a B-arc at the corner".into(),
            ));
        }
        let mut out = self.clone();
        let arc = &mut out.boundary[ci].arcs[i];
        arc.corner_after = match arc.corner_after {
            CornerPolarization::Alpha => CornerPolarization::Beta,
            CornerPolarization::Beta => CornerPolarization::Alpha,
        };
        Ok(out)
    }

    /// Move (d): integrates out a beta-corner between two A-arcs (or an
    /// alpha-corner between two B-arcs), merging them into a single arc.
    pub fn integrate_out_corner(&self, corner: CornerRef) -> Result<CellSurface, SurfaceError> {
        let (ci, i, j) = self.corner_pair(corner)?;
        if i == j {
            return Err(SurfaceError::IncompatiblePolarizations(
                "cannot integrate out the only corner of a circle".into(),
            ));
        }
        let circle = &self.boundary[ci];
        let (a, b) = (&circle.arcs[i], &circle.arcs[j]);
        let opposite = match a.polarization {
            ArcPolarization::A => CornerPolarization::Beta,
            ArcPolarization::B => CornerPolarization::Alpha,
        };
        if a.polarization != b.polarization || a.corner_after != opposite {
            return Err(SurfaceError::IncompatiblePolarizations(format!(
                "integrate-out needs equal arc polarizations with the opposite-type corner, \
                 got {:?}/{:?} at {:?}",
                a.polarization, b.polarization, a.corner_after
            )));
        }
        Ok(self.remove_corner(ci, i, j))
    }

    fn remove_corner(&self, ci: usize, i: usize, j: usize) -> CellSurface {
        let mut out = self.clone();
        let second = out.boundary[ci].arcs[j].clone();
        let first = &mut out.boundary[ci].arcs[i];
        first.slots.extend(second.slots.iter().copied());
        first.corner_after = second.corner_after;
        first.label = format!("{}{}", first.label, second.label);
        out.boundary[ci].arcs.remove(j);
        out
    }

    /// Replaces an unpaired polygon side by `pieces` consecutive sides and
    /// returns the new slot ids. Purely a refinement: topology unchanged.
    fn subdivide_slot(&mut self, slot: SlotId, pieces: usize) -> Vec<SlotId> {
        assert!(self.pairing[slot].is_none(), "only boundary sides subdivide");
        assert!(pieces >= 1);
        let extra = pieces - 1;
        if extra == 0 {
            return vec![slot];
        }
        let p = self.polygon_of(slot);
        self.polygon_sides[p] += extra;
        let remap = |s: SlotId| if s > slot { s + extra } else { s };
        let mut pairing = vec![None; self.pairing.len() + extra];
        let mut labels = vec![String::new(); self.pairing.len() + extra];
        for s in 0..self.pairing.len() {
            pairing[remap(s)] = self.pairing[s].map(remap);
            labels[remap(s)] = std::mem::take(&mut self.labels[s]);
        }
        for e in 1..=extra {
            labels[slot + e] = format!("{}+{}", labels[slot], e);
        }
        self.pairing = pairing;
        self.labels = labels;
        for circle in &mut self.boundary {
            for arc in &mut circle.arcs {
                for s in &mut arc.slots {
                    *s = remap(*s);
                }
            }
        }
        (slot..=slot + extra).collect()
    }
}

fn slot_offsets(polygon_sides: &[usize]) -> Vec<usize> {
    let mut offsets = Vec::with_capacity(polygon_sides.len());
    let mut acc = 0;
    for &n in polygon_sides {
        offsets.push(acc);
        acc += n;
    }
    offsets
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        Self { parent: (0..n).collect() }
    }

    fn find(&mut self, x: usize) -> usize {
        if self.parent[x] != x {
            let root = self.find(self.parent[x]);
            self.parent[x] = root;
        }
        self.parent[x]
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn count_roots(&mut self) -> usize {
        let n = self.parent.len();
        (0..n).filter(|&x| self.find(x) == x).count()
    }
}
