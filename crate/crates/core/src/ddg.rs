//! Discrete differential-geometry operators and functionals.
//!
//! Conventions, fixed once and used everywhere:
//!
//! - The cotangent Laplacian `L` is assembled positive semi-definite:
//!   off-diagonal `L(i,j) = -(cot α + cot β)/2`, diagonal rows summing to
//!   zero on closed meshes. The discrete Laplace–Beltrami operator is then
//!   `Δ = -M⁻¹L`.
//! - `M` is the lumped barycentric mass matrix (one third of each incident
//!   face area per vertex); its entries sum to the surface area.
//! - Mean curvature is the average of the principal curvatures, so the unit
//!   sphere with outward normals has `H = +1` and `Δρ = -2Hn` points inward
//!   on convex surfaces.
//! - Gauss curvature comes from the angle defect divided by the vertex mass,
//!   which makes the total curvature of a closed mesh exactly `2πχ`.

use std::f64::consts::PI;

use crate::mesh::TriMesh;
use crate::sparse::SparseOperator;
use crate::{Error, Result, Vec3};

/// Cotangent magnitudes are clamped here once a face has passed the
/// degenerate-area check, bounding the operator near sliver triangles.
pub const COTAN_CLAMP: f64 = 1e6;

/// Per-vertex scalar field.
pub type ScalarField = Vec<f64>;
/// Per-vertex vector field.
pub type VectorField = Vec<Vec3>;

fn cotan(a: Vec3, b: Vec3) -> f64 {
    let cross = a.cross(&b).norm();
    if cross == 0.0 {
        return COTAN_CLAMP;
    }
    (a.dot(&b) / cross).clamp(-COTAN_CLAMP, COTAN_CLAMP)
}

/// Cotangent Laplacian, positive semi-definite convention.
pub fn cotan_laplacian(mesh: &TriMesh) -> Result<SparseOperator> {
    let area_tol = mesh.degenerate_area_tolerance();
    let positions = mesh.positions();
    let mut triplets: Vec<(usize, usize, f64)> = Vec::with_capacity(mesh.face_count() * 6);
    for (f, tri) in mesh.faces().iter().enumerate() {
        if mesh.face_area(f) <= area_tol {
            return Err(Error::DegenerateFace { face: f });
        }
        let [a, b, c] = *tri;
        let (pa, pb, pc) = (positions[a], positions[b], positions[c]);
        // Half-cotangent of the angle opposite each edge.
        let w_bc = 0.5 * cotan(pb - pa, pc - pa);
        let w_ca = 0.5 * cotan(pc - pb, pa - pb);
        let w_ab = 0.5 * cotan(pa - pc, pb - pc);
        for (i, j, w) in [(b, c, w_bc), (c, a, w_ca), (a, b, w_ab)] {
            let (lo, hi) = (i.min(j), i.max(j));
            triplets.push((lo, hi, -w));
            triplets.push((lo, lo, w));
            triplets.push((hi, hi, w));
        }
    }
    Ok(SparseOperator::from_upper_triplets(
        mesh.vertex_count(),
        triplets,
        true,
    ))
}

/// Lumped barycentric mass matrix (diagonal, strictly positive).
pub fn mass_matrix(mesh: &TriMesh) -> SparseOperator {
    let mut masses = vec![0.0; mesh.vertex_count()];
    for (f, tri) in mesh.faces().iter().enumerate() {
        let share = mesh.face_area(f) / 3.0;
        for &v in tri {
            masses[v] += share;
        }
    }
    SparseOperator::diagonal(&masses, true)
}

/// Angle-weighted unit vertex normals; outward on CCW-oriented closed meshes.
pub fn vertex_normals(mesh: &TriMesh) -> Result<VectorField> {
    let positions = mesh.positions();
    let mut accum = vec![Vec3::zeros(); mesh.vertex_count()];
    for (f, tri) in mesh.faces().iter().enumerate() {
        let area_vec = mesh.face_area_vector(f);
        let norm = area_vec.norm();
        if norm == 0.0 {
            continue;
        }
        let unit = area_vec / norm;
        let angles = mesh.face_angles(f);
        for (corner, &v) in tri.iter().enumerate() {
            accum[v] += unit * angles[corner];
        }
    }
    accum
        .into_iter()
        .enumerate()
        .map(|(v, acc)| {
            let n = acc.norm();
            if n < 1e-12 {
                Err(Error::ZeroNormal { vertex: v })
            } else {
                Ok(acc / n)
            }
        })
        .collect()
}

/// Discrete `Δρ = -M⁻¹(Lρ)`: magnitude `2|H|`, pointing inward on convex
/// outward-oriented meshes.
pub fn mean_curvature_normal(
    mesh: &TriMesh,
    laplacian: &SparseOperator,
    mass: &SparseOperator,
) -> VectorField {
    let lp = laplacian.mul_vec3(mesh.positions());
    let masses = mass.diagonal_entries();
    lp.into_iter()
        .zip(&masses)
        .map(|(v, &m)| -v / m)
        .collect()
}

/// Signed mean curvature `H = -(Δρ)·n / 2`; `+1/r` on a radius-`r` sphere
/// with outward normals.
pub fn mean_curvature_scalar(curvature_normal: &[Vec3], normals: &[Vec3]) -> ScalarField {
    curvature_normal
        .iter()
        .zip(normals)
        .map(|(h, n)| -0.5 * h.dot(n))
        .collect()
}

/// Gauss curvature by angle defect over vertex mass.
pub fn gauss_curvature(mesh: &TriMesh, mass: &SparseOperator) -> ScalarField {
    let mut angle_sums = vec![0.0; mesh.vertex_count()];
    for (f, tri) in mesh.faces().iter().enumerate() {
        let angles = mesh.face_angles(f);
        for (corner, &v) in tri.iter().enumerate() {
            angle_sums[v] += angles[corner];
        }
    }
    let masses = mass.diagonal_entries();
    angle_sums
        .iter()
        .enumerate()
        .map(|(v, &sum)| {
            let full = if mesh.is_boundary_vertex(v) { PI } else { 2.0 * PI };
            (full - sum) / masses[v]
        })
        .collect()
}

/// Sum of face areas.
pub fn surface_area(mesh: &TriMesh) -> f64 {
    (0..mesh.face_count()).map(|f| mesh.face_area(f)).sum()
}

/// Signed enclosed volume of a closed mesh; positive for outward orientation.
pub fn enclosed_volume(mesh: &TriMesh) -> Result<f64> {
    if !mesh.is_closed() {
        return Err(Error::VolumeUndefined);
    }
    let positions = mesh.positions();
    let volume = mesh
        .faces()
        .iter()
        .map(|&[a, b, c]| positions[a].dot(&positions[b].cross(&positions[c])))
        .sum::<f64>()
        / 6.0;
    Ok(volume)
}

/// `∫ H² dS` discretized as `Σ H(i)² m(i)`.
pub fn willmore_energy(mean: &[f64], mass: &SparseOperator) -> f64 {
    mean.iter()
        .zip(&mass.diagonal_entries())
        .map(|(h, m)| h * h * m)
        .sum()
}

/// `∫ |∇H|² dS` discretized as the Laplacian quadratic form `HᵀLH`.
pub fn dirichlet_energy(field: &[f64], laplacian: &SparseOperator) -> f64 {
    laplacian.quadratic_form(field)
}

/// `∫ |Δρ|² dS`, the squared tension field; `≈ Σ 4H² m` on smooth closed
/// meshes.
pub fn biharmonic_energy(curvature_normal: &[Vec3], mass: &SparseOperator) -> f64 {
    curvature_normal
        .iter()
        .zip(&mass.diagonal_entries())
        .map(|(h, m)| h.norm_squared() * m)
        .sum()
}

/// All per-state operators and fields a flow step needs.
#[derive(Debug, Clone)]
pub struct Operators {
    pub laplacian: SparseOperator,
    pub mass: SparseOperator,
    /// Discrete `Δρ` per vertex.
    pub curvature_normal: VectorField,
    pub normals: VectorField,
    pub mean: ScalarField,
    pub gauss: ScalarField,
}

impl Operators {
    pub fn build(mesh: &TriMesh) -> Result<Operators> {
        let laplacian = cotan_laplacian(mesh)?;
        let mass = mass_matrix(mesh);
        let curvature_normal = mean_curvature_normal(mesh, &laplacian, &mass);
        let normals = vertex_normals(mesh)?;
        let mean = mean_curvature_scalar(&curvature_normal, &normals);
        let gauss = gauss_curvature(mesh, &mass);
        Ok(Operators {
            laplacian,
            mass,
            curvature_normal,
            normals,
            mean,
            gauss,
        })
    }

    /// Apply the discrete Laplace–Beltrami `Δ = -M⁻¹L` to a vector field.
    pub fn laplace_beltrami_vec3(&self, field: &[Vec3]) -> VectorField {
        let lv = self.laplacian.mul_vec3(field);
        lv.into_iter()
            .zip(&self.mass.diagonal_entries())
            .map(|(v, &m)| -v / m)
            .collect()
    }

    /// Apply `Δ = -M⁻¹L` to a scalar field.
    pub fn laplace_beltrami(&self, field: &[f64]) -> ScalarField {
        let lv = self.laplacian.mul_vec(field);
        lv.into_iter()
            .zip(&self.mass.diagonal_entries())
            .map(|(v, &m)| -v / m)
            .collect()
    }
}
