//! Indexed triangle meshes with precomputed adjacency and validation.
//!
//! A [`TriMesh`] is an indexed face set: vertex positions plus CCW-oriented
//! triangles, with vertex→face, vertex→one-ring, and edge adjacency computed
//! once at construction. Connectivity is immutable; a flow produces new
//! meshes via [`TriMesh::with_positions`], which shares the adjacency.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use crate::{Error, Result, Vec3};

/// Relative tolerance for degenerate-triangle detection:
/// area < `DEGENERATE_AREA_FACTOR` × (bounding-box diagonal)².
pub const DEGENERATE_AREA_FACTOR: f64 = 1e-12;

/// An undirected mesh edge with its incident faces.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Edge {
    /// Endpoint vertex indices, `vertices[0] < vertices[1]`.
    pub vertices: [usize; 2],
    /// Incident faces (one entry `None` on the boundary).
    pub faces: [Option<usize>; 2],
    /// Vertex opposite this edge within each incident face.
    pub opposite: [Option<usize>; 2],
}

impl Edge {
    pub fn is_boundary(&self) -> bool {
        self.faces[1].is_none()
    }
}

#[derive(Debug)]
struct Connectivity {
    faces: Vec<[usize; 3]>,
    vertex_faces: Vec<Vec<usize>>,
    one_rings: Vec<Vec<usize>>,
    edges: Vec<Edge>,
    boundary_loops: Vec<Vec<usize>>,
    boundary_vertex: Vec<bool>,
}

/// Indexed triangle mesh with derived adjacency.
#[derive(Debug, Clone)]
pub struct TriMesh {
    positions: Vec<Vec3>,
    conn: Arc<Connectivity>,
}

impl TriMesh {
    /// Build a mesh from raw positions and faces, rejecting anything a flow
    /// cannot work on: out-of-range or repeated indices, non-manifold edges,
    /// inconsistent winding, and boundary edges that do not close into loops.
    pub fn from_raw(positions: Vec<Vec3>, faces: Vec<[usize; 3]>) -> Result<Self> {
        let report = validate_soup(&positions, &faces);
        if let Some(err) = report.first_structural_error() {
            return Err(err);
        }

        let n = positions.len();
        let mut vertex_faces = vec![Vec::new(); n];
        for (f, tri) in faces.iter().enumerate() {
            for &v in tri {
                vertex_faces[v].push(f);
            }
        }

        let mut edge_map: BTreeMap<(usize, usize), Edge> = BTreeMap::new();
        for (f, tri) in faces.iter().enumerate() {
            for c in 0..3 {
                let a = tri[c];
                let b = tri[(c + 1) % 3];
                let opp = tri[(c + 2) % 3];
                let key = (a.min(b), a.max(b));
                let entry = edge_map.entry(key).or_insert(Edge {
                    vertices: [key.0, key.1],
                    faces: [None, None],
                    opposite: [None, None],
                });
                let slot = usize::from(entry.faces[0].is_some());
                entry.faces[slot] = Some(f);
                entry.opposite[slot] = Some(opp);
            }
        }
        let edges: Vec<Edge> = edge_map.into_values().collect();

        let mut one_rings = vec![Vec::new(); n];
        for e in &edges {
            let [a, b] = e.vertices;
            one_rings[a].push(b);
            one_rings[b].push(a);
        }
        for ring in &mut one_rings {
            ring.sort_unstable();
        }

        let mut boundary_vertex = vec![false; n];
        for e in edges.iter().filter(|e| e.is_boundary()) {
            boundary_vertex[e.vertices[0]] = true;
            boundary_vertex[e.vertices[1]] = true;
        }
        let boundary_loops = trace_boundary_loops(n, &edges)?;

        Ok(TriMesh {
            positions,
            conn: Arc::new(Connectivity {
                faces,
                vertex_faces,
                one_rings,
                edges,
                boundary_loops,
                boundary_vertex,
            }),
        })
    }

    /// Same connectivity, new positions.
    pub fn with_positions(&self, positions: Vec<Vec3>) -> TriMesh {
        assert_eq!(positions.len(), self.vertex_count());
        TriMesh {
            positions,
            conn: Arc::clone(&self.conn),
        }
    }

    pub fn positions(&self) -> &[Vec3] {
        &self.positions
    }

    pub fn faces(&self) -> &[[usize; 3]] {
        &self.conn.faces
    }

    pub fn edges(&self) -> &[Edge] {
        &self.conn.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.positions.len()
    }

    pub fn face_count(&self) -> usize {
        self.conn.faces.len()
    }

    pub fn edge_count(&self) -> usize {
        self.conn.edges.len()
    }

    /// Faces incident to vertex `v`.
    pub fn vertex_faces(&self, v: usize) -> &[usize] {
        &self.conn.vertex_faces[v]
    }

    /// Sorted vertex indices adjacent to `v`.
    pub fn one_ring(&self, v: usize) -> &[usize] {
        &self.conn.one_rings[v]
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.conn.boundary_vertex[v]
    }

    /// Boundary loops as ordered vertex cycles.
    pub fn boundary_loops(&self) -> &[Vec<usize>] {
        &self.conn.boundary_loops
    }

    pub fn is_closed(&self) -> bool {
        self.conn.boundary_loops.is_empty()
    }

    /// V − E + F.
    pub fn euler_characteristic(&self) -> i64 {
        self.vertex_count() as i64 - self.edge_count() as i64 + self.face_count() as i64
    }

    /// Twice the area vector of face `f` (cross product of two edges).
    pub fn face_area_vector(&self, f: usize) -> Vec3 {
        let [a, b, c] = self.conn.faces[f];
        (self.positions[b] - self.positions[a]).cross(&(self.positions[c] - self.positions[a]))
    }

    pub fn face_area(&self, f: usize) -> f64 {
        0.5 * self.face_area_vector(f).norm()
    }

    /// Corner angles of face `f`, in face-vertex order.
    pub fn face_angles(&self, f: usize) -> [f64; 3] {
        let [a, b, c] = self.conn.faces[f];
        let (pa, pb, pc) = (self.positions[a], self.positions[b], self.positions[c]);
        [
            corner_angle(pa, pb, pc),
            corner_angle(pb, pc, pa),
            corner_angle(pc, pa, pb),
        ]
    }

    pub fn bounding_box(&self) -> (Vec3, Vec3) {
        let mut lo = Vec3::repeat(f64::INFINITY);
        let mut hi = Vec3::repeat(f64::NEG_INFINITY);
        for p in &self.positions {
            lo = lo.inf(p);
            hi = hi.sup(p);
        }
        (lo, hi)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        (hi - lo).norm()
    }

    /// Area below which a triangle counts as degenerate on this mesh.
    pub fn degenerate_area_tolerance(&self) -> f64 {
        let d = self.bbox_diagonal();
        DEGENERATE_AREA_FACTOR * d * d
    }

    pub fn min_edge_length(&self) -> f64 {
        self.conn
            .edges
            .iter()
            .map(|e| (self.positions[e.vertices[0]] - self.positions[e.vertices[1]]).norm())
            .fold(f64::INFINITY, f64::min)
    }

    pub fn min_triangle_angle(&self) -> f64 {
        (0..self.face_count())
            .flat_map(|f| self.face_angles(f))
            .fold(f64::INFINITY, f64::min)
    }

    /// Full validation report for this mesh (geometric findings included).
    pub fn validate(&self) -> ValidationReport {
        validate_soup(&self.positions, &self.conn.faces)
    }
}

/// Angle at `apex` formed by directions to `u` and `v`.
pub(crate) fn corner_angle(apex: Vec3, u: Vec3, v: Vec3) -> f64 {
    let du = u - apex;
    let dv = v - apex;
    let denom = du.norm() * dv.norm();
    if denom == 0.0 {
        return 0.0;
    }
    (du.dot(&dv) / denom).clamp(-1.0, 1.0).acos()
}

fn trace_boundary_loops(n: usize, edges: &[Edge]) -> Result<Vec<Vec<usize>>> {
    let mut incident: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (idx, e) in edges.iter().enumerate() {
        if e.is_boundary() {
            for &v in &e.vertices {
                incident.entry(v).or_default().push(idx);
            }
        }
    }
    for (&v, list) in &incident {
        if list.len() != 2 {
            return Err(Error::OpenBoundary { vertex: v });
        }
    }
    let _ = n;

    let mut visited = vec![false; edges.len()];
    let mut loops = Vec::new();
    let starts: Vec<usize> = incident.keys().copied().collect();
    for &start in &starts {
        let first_edge = incident[&start]
            .iter()
            .copied()
            .find(|&e| !visited[e]);
        let Some(mut edge_idx) = first_edge else {
            continue;
        };
        let mut cycle = vec![start];
        let mut current = start;
        loop {
            visited[edge_idx] = true;
            let e = &edges[edge_idx];
            let next = if e.vertices[0] == current {
                e.vertices[1]
            } else {
                e.vertices[0]
            };
            if next == start {
                break;
            }
            cycle.push(next);
            current = next;
            edge_idx = incident[&current]
                .iter()
                .copied()
                .find(|&i| !visited[i])
                .ok_or(Error::OpenBoundary { vertex: current })?;
        }
        loops.push(cycle);
    }
    Ok(loops)
}

/// Findings from scanning a raw face soup.
#[derive(Debug, Clone, Default)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub face_count: usize,
    pub edge_count: usize,
    /// Faces referencing vertices outside the position array, with the
    /// offending index.
    pub out_of_range_faces: Vec<(usize, usize)>,
    /// Faces with a repeated vertex index.
    pub repeated_index_faces: Vec<usize>,
    /// Edges shared by more than two faces, with their face counts.
    pub non_manifold_edges: Vec<([usize; 2], usize)>,
    /// Interior edges traversed twice in the same direction.
    pub orientation_violations: Vec<[usize; 2]>,
    /// Faces whose area is below the degenerate tolerance.
    pub degenerate_faces: Vec<usize>,
    /// Number of closed boundary loops.
    pub boundary_loop_count: usize,
    /// Total boundary edges.
    pub boundary_edge_count: usize,
    /// Boundary vertices whose boundary edges do not pair into a loop.
    pub open_boundary_vertices: Vec<usize>,
}

impl ValidationReport {
    /// True when the mesh satisfies every structural invariant.
    pub fn is_structurally_valid(&self) -> bool {
        self.first_structural_error().is_none()
    }

    /// True when structurally valid and free of degenerate triangles.
    pub fn is_clean(&self) -> bool {
        self.is_structurally_valid() && self.degenerate_faces.is_empty()
    }

    fn first_structural_error(&self) -> Option<Error> {
        if let Some(&(f, index)) = self.out_of_range_faces.first() {
            return Some(Error::FaceIndexOutOfRange {
                face: f,
                index,
                vertex_count: self.vertex_count,
            });
        }
        if let Some(&f) = self.repeated_index_faces.first() {
            return Some(Error::RepeatedFaceIndex { face: f });
        }
        if let Some(&([a, b], count)) = self.non_manifold_edges.first() {
            return Some(Error::NonManifoldEdge { a, b, count });
        }
        if let Some(&[a, b]) = self.orientation_violations.first() {
            return Some(Error::InconsistentOrientation { a, b });
        }
        if let Some(&v) = self.open_boundary_vertices.first() {
            return Some(Error::OpenBoundary { vertex: v });
        }
        None
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "vertices: {}  faces: {}  edges: {}",
            self.vertex_count, self.face_count, self.edge_count
        )?;
        writeln!(
            f,
            "boundary: {} loop(s), {} edge(s)",
            self.boundary_loop_count, self.boundary_edge_count
        )?;
        let mut issue = |label: &str, n: usize| -> fmt::Result {
            if n > 0 {
                writeln!(f, "{label}: {n}")?;
            }
            Ok(())
        };
        issue("out-of-range faces", self.out_of_range_faces.len())?;
        issue("repeated-index faces", self.repeated_index_faces.len())?;
        issue("non-manifold edges", self.non_manifold_edges.len())?;
        issue("orientation violations", self.orientation_violations.len())?;
        issue("degenerate faces", self.degenerate_faces.len())?;
        issue("open boundary vertices", self.open_boundary_vertices.len())?;
        if self.is_clean() {
            writeln!(f, "no violations")?;
        }
        Ok(())
    }
}

/// Scan raw positions and faces for every class of violation at once.
pub fn validate_soup(positions: &[Vec3], faces: &[[usize; 3]]) -> ValidationReport {
    let n = positions.len();
    let mut report = ValidationReport {
        vertex_count: n,
        face_count: faces.len(),
        ..Default::default()
    };

    for (f, tri) in faces.iter().enumerate() {
        if let Some(&bad) = tri.iter().find(|&&v| v >= n) {
            report.out_of_range_faces.push((f, bad));
        } else if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            report.repeated_index_faces.push(f);
        }
    }

    // Degenerate areas, scaled by the bounding box.
    let mut lo = Vec3::repeat(f64::INFINITY);
    let mut hi = Vec3::repeat(f64::NEG_INFINITY);
    for p in positions {
        lo = lo.inf(p);
        hi = hi.sup(p);
    }
    let diag = if n == 0 { 0.0 } else { (hi - lo).norm() };
    let area_tol = DEGENERATE_AREA_FACTOR * diag * diag;
    for (f, tri) in faces.iter().enumerate() {
        if tri.iter().all(|&v| v < n) {
            let area = 0.5
                * (positions[tri[1]] - positions[tri[0]])
                    .cross(&(positions[tri[2]] - positions[tri[0]]))
                    .norm();
            if area <= area_tol {
                report.degenerate_faces.push(f);
            }
        }
    }

    // Edge usage: count incident faces and directed traversals.
    let mut usage: BTreeMap<(usize, usize), (usize, usize, usize)> = BTreeMap::new();
    for tri in faces.iter().filter(|t| t.iter().all(|&v| v < n)) {
        if tri[0] == tri[1] || tri[1] == tri[2] || tri[0] == tri[2] {
            continue;
        }
        for c in 0..3 {
            let a = tri[c];
            let b = tri[(c + 1) % 3];
            let key = (a.min(b), a.max(b));
            let entry = usage.entry(key).or_insert((0, 0, 0));
            entry.0 += 1;
            if a < b {
                entry.1 += 1;
            } else {
                entry.2 += 1;
            }
        }
    }
    report.edge_count = usage.len();

    let mut boundary_degree: BTreeMap<usize, usize> = BTreeMap::new();
    for (&(a, b), &(count, forward, backward)) in &usage {
        if count > 2 {
            report.non_manifold_edges.push(([a, b], count));
        } else if count == 2 && (forward != 1 || backward != 1) {
            report.orientation_violations.push([a, b]);
        } else if count == 1 {
            report.boundary_edge_count += 1;
            *boundary_degree.entry(a).or_insert(0) += 1;
            *boundary_degree.entry(b).or_insert(0) += 1;
        }
    }
    for (&v, &deg) in &boundary_degree {
        if deg != 2 {
            report.open_boundary_vertices.push(v);
        }
    }

    // Count loops only when the boundary is clean enough to trace.
    if report.open_boundary_vertices.is_empty() && report.boundary_edge_count > 0 {
        let mut remaining: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
        let boundary_edges: Vec<[usize; 2]> = usage
            .iter()
            .filter(|(_, &(count, _, _))| count == 1)
            .map(|(&(a, b), _)| [a, b])
            .collect();
        for (i, e) in boundary_edges.iter().enumerate() {
            remaining.entry(e[0]).or_default().push(i);
            remaining.entry(e[1]).or_default().push(i);
        }
        let mut visited = vec![false; boundary_edges.len()];
        for start in 0..boundary_edges.len() {
            if visited[start] {
                continue;
            }
            report.boundary_loop_count += 1;
            let origin = boundary_edges[start][0];
            let mut current = origin;
            let mut edge = start;
            loop {
                visited[edge] = true;
                let e = boundary_edges[edge];
                current = if e[0] == current { e[1] } else { e[0] };
                if current == origin {
                    break;
                }
                match remaining[&current].iter().copied().find(|&i| !visited[i]) {
                    Some(next) => edge = next,
                    None => break,
                }
            }
        }
    }

    report
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tetrahedron() -> TriMesh {
        let positions = vec![
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ];
        let faces = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 3, 2]];
        TriMesh::from_raw(positions, faces).unwrap()
    }

    #[test]
    fn tetrahedron_counts_satisfy_euler() {
        let m = tetrahedron();
        assert_eq!(m.vertex_count(), 4);
        assert_eq!(m.face_count(), 4);
        assert_eq!(m.edge_count(), 6);
        assert_eq!(m.euler_characteristic(), 2);
        assert!(m.is_closed());
    }

    #[test]
    fn two_triangles_share_one_boundary_loop() {
        let positions = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 1.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
        ];
        let m = TriMesh::from_raw(positions, vec![[0, 1, 2], [0, 2, 3]]).unwrap();
        assert_eq!(m.boundary_loops().len(), 1);
        assert_eq!(m.boundary_loops()[0].len(), 4);
        assert_eq!(m.edge_count(), 5);
    }

    #[test]
    fn flipped_winding_reports_orientation_violations() {
        let positions = vec![
            Vec3::new(1.0, 1.0, 1.0),
            Vec3::new(1.0, -1.0, -1.0),
            Vec3::new(-1.0, 1.0, -1.0),
            Vec3::new(-1.0, -1.0, 1.0),
        ];
        // Last face wound backwards.
        let faces = vec![[0, 1, 2], [0, 3, 1], [0, 2, 3], [1, 2, 3]];
        let report = validate_soup(&positions, &faces);
        assert_eq!(report.orientation_violations.len(), 3);
        assert!(TriMesh::from_raw(positions, faces).is_err());
    }

    #[test]
    fn duplicate_positions_flag_degenerate_face() {
        let positions = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
        ];
        let report = validate_soup(&positions, &[[0, 1, 2]]);
        assert_eq!(report.degenerate_faces, vec![0]);
    }

    #[test]
    fn non_manifold_edge_rejected() {
        let positions = vec![
            Vec3::new(0.0, 0.0, 0.0),
            Vec3::new(1.0, 0.0, 0.0),
            Vec3::new(0.0, 1.0, 0.0),
            Vec3::new(0.0, 0.0, 1.0),
            Vec3::new(0.0, 0.0, -1.0),
        ];
        let faces = vec![[0, 1, 2], [0, 1, 3], [1, 0, 4]];
        let report = validate_soup(&positions, &faces);
        assert_eq!(report.non_manifold_edges.len(), 1);
        assert!(matches!(
            TriMesh::from_raw(positions, faces),
            Err(Error::NonManifoldEdge { .. })
        ));
    }

    #[test]
    fn with_positions_shares_connectivity() {
        let m = tetrahedron();
        let moved = m.with_positions(m.positions().iter().map(|p| p * 2.0).collect());
        assert_eq!(moved.edge_count(), m.edge_count());
        assert_eq!(moved.face_count(), m.face_count());
        assert_eq!(moved.positions()[0], Vec3::new(2.0, 2.0, 2.0));
    }
}
