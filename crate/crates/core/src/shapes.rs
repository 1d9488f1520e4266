//! Analytic test shapes: icospheres, ellipsoids, tori, and flat disks,
//! optionally perturbed by seeded uniform noise.

use std::collections::HashMap;

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::ddg;
use crate::mesh::TriMesh;
use crate::{Error, Result, Vec3};

/// Hard cap on subdivision levels (an icosphere at the cap has ~655k faces).
pub const MAX_SUBDIVISIONS: u32 = 8;

/// Shape family and its dimensions.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ShapeKind {
    Icosphere { radius: f64 },
    Ellipsoid { semi_axes: [f64; 3] },
    Torus { major: f64, minor: f64 },
    Disk { radius: f64 },
}

/// Seeded uniform vertex displacement in `[-amplitude, amplitude]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NoiseSpec {
    pub amplitude: f64,
    pub seed: u64,
}

/// Full description of a generated shape.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeSpec {
    pub kind: ShapeKind,
    pub subdivisions: u32,
    pub noise: Option<NoiseSpec>,
}

impl ShapeSpec {
    pub fn new(kind: ShapeKind, subdivisions: u32) -> Self {
        ShapeSpec {
            kind,
            subdivisions,
            noise: None,
        }
    }

    pub fn with_noise(mut self, amplitude: f64, seed: u64) -> Self {
        self.noise = Some(NoiseSpec { amplitude, seed });
        self
    }

    fn check(&self) -> Result<()> {
        if self.subdivisions > MAX_SUBDIVISIONS {
            return Err(Error::SubdivisionCap {
                requested: self.subdivisions,
                cap: MAX_SUBDIVISIONS,
            });
        }
        match self.kind {
            ShapeKind::Icosphere { radius } | ShapeKind::Disk { radius } => {
                if radius <= 0.0 {
                    return Err(Error::ShapeSpec(format!("radius must be > 0, got {radius}")));
                }
            }
            ShapeKind::Ellipsoid { semi_axes } => {
                if semi_axes.iter().any(|&a| a <= 0.0) {
                    return Err(Error::ShapeSpec(format!(
                        "semi-axes must be > 0, got {semi_axes:?}"
                    )));
                }
            }
            ShapeKind::Torus { major, minor } => {
                if major <= 0.0 || minor <= 0.0 {
                    return Err(Error::ShapeSpec("torus radii must be > 0".into()));
                }
                if minor >= major {
                    return Err(Error::ShapeSpec(format!(
                        "minor radius {minor} must be smaller than major radius {major}"
                    )));
                }
            }
        }
        if let Some(noise) = self.noise {
            if noise.amplitude < 0.0 {
                return Err(Error::ShapeSpec("noise amplitude must be >= 0".into()));
            }
        }
        Ok(())
    }
}

/// Generate the mesh described by `spec`.
pub fn generate(spec: &ShapeSpec) -> Result<TriMesh> {
    spec.check()?;
    let mesh = match spec.kind {
        ShapeKind::Icosphere { radius } => icosphere(radius, spec.subdivisions)?,
        ShapeKind::Ellipsoid { semi_axes } => {
            let unit = icosphere(1.0, spec.subdivisions)?;
            let positions = unit
                .positions()
                .iter()
                .map(|p| Vec3::new(p.x * semi_axes[0], p.y * semi_axes[1], p.z * semi_axes[2]))
                .collect();
            unit.with_positions(positions)
        }
        ShapeKind::Torus { major, minor } => torus(major, minor, spec.subdivisions)?,
        ShapeKind::Disk { radius } => disk(radius, spec.subdivisions)?,
    };
    match spec.noise {
        Some(noise) if noise.amplitude > 0.0 => apply_noise(&mesh, spec.kind, noise),
        _ => Ok(mesh),
    }
}

fn apply_noise(mesh: &TriMesh, kind: ShapeKind, noise: NoiseSpec) -> Result<TriMesh> {
    let directions: Vec<Vec3> = match kind {
        // Radial for sphere-topology shapes, along the vertex normal otherwise.
        ShapeKind::Icosphere { .. } | ShapeKind::Ellipsoid { .. } => mesh
            .positions()
            .iter()
            .map(|p| {
                let n = p.norm();
                if n == 0.0 {
                    Vec3::zeros()
                } else {
                    p / n
                }
            })
            .collect(),
        ShapeKind::Torus { .. } | ShapeKind::Disk { .. } => ddg::vertex_normals(mesh)?,
    };
    let mut rng = ChaCha8Rng::seed_from_u64(noise.seed);
    let positions = mesh
        .positions()
        .iter()
        .zip(&directions)
        .map(|(p, d)| p + d * rng.gen_range(-noise.amplitude..=noise.amplitude))
        .collect();
    Ok(mesh.with_positions(positions))
}

fn icosphere(radius: f64, subdivisions: u32) -> Result<TriMesh> {
    let phi = (1.0 + 5.0_f64.sqrt()) / 2.0;
    let mut positions: Vec<Vec3> = vec![
        Vec3::new(-1.0, phi, 0.0),
        Vec3::new(1.0, phi, 0.0),
        Vec3::new(-1.0, -phi, 0.0),
        Vec3::new(1.0, -phi, 0.0),
        Vec3::new(0.0, -1.0, phi),
        Vec3::new(0.0, 1.0, phi),
        Vec3::new(0.0, -1.0, -phi),
        Vec3::new(0.0, 1.0, -phi),
        Vec3::new(phi, 0.0, -1.0),
        Vec3::new(phi, 0.0, 1.0),
        Vec3::new(-phi, 0.0, -1.0),
        Vec3::new(-phi, 0.0, 1.0),
    ]
    .into_iter()
    .map(|p| p.normalize() * radius)
    .collect();

    let mut faces: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];

    for _ in 0..subdivisions {
        let mut midpoints: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next_faces = Vec::with_capacity(faces.len() * 4);
        for tri in &faces {
            let mut mids = [0usize; 3];
            for c in 0..3 {
                let a = tri[c];
                let b = tri[(c + 1) % 3];
                let key = (a.min(b), a.max(b));
                mids[c] = *midpoints.entry(key).or_insert_with(|| {
                    let mid = (positions[a] + positions[b]) * 0.5;
                    positions.push(mid.normalize() * radius);
                    positions.len() - 1
                });
            }
            next_faces.push([tri[0], mids[0], mids[2]]);
            next_faces.push([tri[1], mids[1], mids[0]]);
            next_faces.push([tri[2], mids[2], mids[1]]);
            next_faces.push([mids[0], mids[1], mids[2]]);
        }
        faces = next_faces;
    }

    TriMesh::from_raw(positions, faces)
}

fn torus(major: f64, minor: f64, subdivisions: u32) -> Result<TriMesh> {
    let around = 16usize << subdivisions;
    let tube = 8usize << subdivisions;
    let mut positions = Vec::with_capacity(around * tube);
    for i in 0..around {
        let phi = 2.0 * std::f64::consts::PI * i as f64 / around as f64;
        for j in 0..tube {
            let psi = 2.0 * std::f64::consts::PI * j as f64 / tube as f64;
            let ring = major + minor * psi.cos();
            positions.push(Vec3::new(
                ring * phi.cos(),
                ring * phi.sin(),
                minor * psi.sin(),
            ));
        }
    }
    let index = |i: usize, j: usize| (i % around) * tube + (j % tube);
    let mut faces = Vec::with_capacity(2 * around * tube);
    for i in 0..around {
        for j in 0..tube {
            let a = index(i, j);
            let b = index(i + 1, j);
            let c = index(i + 1, j + 1);
            let d = index(i, j + 1);
            faces.push([a, b, c]);
            faces.push([a, c, d]);
        }
    }
    TriMesh::from_raw(positions, faces)
}

fn disk(radius: f64, subdivisions: u32) -> Result<TriMesh> {
    let rings = 3usize << subdivisions;
    let mut positions = vec![Vec3::zeros()];
    let mut ring_start = vec![0usize; rings + 1];
    for j in 1..=rings {
        ring_start[j] = positions.len();
        let count = 6 * j;
        let r = radius * j as f64 / rings as f64;
        for k in 0..count {
            let theta = 2.0 * std::f64::consts::PI * k as f64 / count as f64;
            positions.push(Vec3::new(r * theta.cos(), r * theta.sin(), 0.0));
        }
    }

    let mut faces = Vec::new();
    // Innermost fan around the center vertex.
    for k in 0..6 {
        faces.push([0, ring_start[1] + k, ring_start[1] + (k + 1) % 6]);
    }
    // Annuli between consecutive rings, merged by angle.
    for j in 2..=rings {
        let inner_count = 6 * (j - 1);
        let outer_count = 6 * j;
        let inner = |k: usize| ring_start[j - 1] + k % inner_count;
        let outer = |k: usize| ring_start[j] + k % outer_count;
        let inner_angle = |k: usize| k as f64 / inner_count as f64;
        let outer_angle = |k: usize| k as f64 / outer_count as f64;
        let (mut ki, mut ko) = (0usize, 0usize);
        while ki < inner_count || ko < outer_count {
            let advance_outer = if ko >= outer_count {
                false
            } else if ki >= inner_count {
                true
            } else {
                outer_angle(ko + 1) <= inner_angle(ki + 1)
            };
            if advance_outer {
                faces.push([inner(ki), outer(ko), outer(ko + 1)]);
                ko += 1;
            } else {
                faces.push([inner(ki), outer(ko), inner(ki + 1)]);
                ki += 1;
            }
        }
    }
    TriMesh::from_raw(positions, faces)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn icosahedron_counts() {
        let m = generate(&ShapeSpec::new(ShapeKind::Icosphere { radius: 1.0 }, 0)).unwrap();
        assert_eq!(m.vertex_count(), 12);
        assert_eq!(m.face_count(), 20);
        assert_eq!(m.edge_count(), 30);
    }

    #[test]
    fn icosphere_face_count_grows_fourfold() {
        for k in 0..4 {
            let m = generate(&ShapeSpec::new(ShapeKind::Icosphere { radius: 1.0 }, k)).unwrap();
            assert_eq!(m.face_count(), 20 * 4usize.pow(k));
            assert_eq!(m.vertex_count(), 10 * 4usize.pow(k) + 2);
            assert_eq!(m.euler_characteristic(), 2);
        }
    }

    #[test]
    fn torus_is_genus_one() {
        let m = generate(&ShapeSpec::new(
            ShapeKind::Torus {
                major: 2.0,
                minor: 0.5,
            },
            2,
        ))
        .unwrap();
        assert_eq!(m.vertex_count(), 64 * 32);
        assert_eq!(m.euler_characteristic(), 0);
        assert!(m.is_closed());
    }

    #[test]
    fn disk_has_one_boundary_loop() {
        let m = generate(&ShapeSpec::new(ShapeKind::Disk { radius: 1.0 }, 1)).unwrap();
        assert_eq!(m.boundary_loops().len(), 1);
        let rings = 6usize;
        assert_eq!(m.boundary_loops()[0].len(), 6 * rings);
        assert_eq!(m.vertex_count(), 1 + 3 * rings * (rings + 1));
        assert_eq!(m.euler_characteristic(), 1);
    }

    #[test]
    fn generated_closed_shapes_are_outward_oriented() {
        for spec in [
            ShapeSpec::new(ShapeKind::Icosphere { radius: 1.0 }, 1),
            ShapeSpec::new(
                ShapeKind::Torus {
                    major: 2.0,
                    minor: 0.5,
                },
                1,
            ),
        ] {
            let m = generate(&spec).unwrap();
            assert!(crate::ddg::enclosed_volume(&m).unwrap() > 0.0);
        }
    }

    #[test]
    fn noise_is_deterministic_per_seed() {
        let spec = ShapeSpec::new(ShapeKind::Icosphere { radius: 1.0 }, 2).with_noise(0.02, 7);
        let a = generate(&spec).unwrap();
        let b = generate(&spec).unwrap();
        assert_eq!(a.positions(), b.positions());

        let other_seed = ShapeSpec::new(ShapeKind::Icosphere { radius: 1.0 }, 2).with_noise(0.02, 8);
        let c = generate(&other_seed).unwrap();
        assert_ne!(a.positions(), c.positions());
    }

    #[test]
    fn subdivision_cap_is_enforced() {
        let err = generate(&ShapeSpec::new(ShapeKind::Icosphere { radius: 1.0 }, 9)).unwrap_err();
        assert!(matches!(err, Error::SubdivisionCap { .. }));
    }

    #[test]
    fn invalid_dimensions_are_rejected() {
        assert!(generate(&ShapeSpec::new(
            ShapeKind::Ellipsoid {
                semi_axes: [1.0, 0.0, 1.0]
            },
            1
        ))
        .is_err());
        assert!(generate(&ShapeSpec::new(
            ShapeKind::Torus {
                major: 1.0,
                minor: 1.5
            },
            1
        ))
        .is_err());
    }
}
