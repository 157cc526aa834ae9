//! Built-in example varieties: `pn:<n>`, `p1n:<n>`, `hirzebruch:<a>`, `bl3p2`, `box:<a1>x<a2>x...`.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::Rng;

use crate::error::{Error, Result};
use crate::lattice::{Fan, LatticePolytope, LatticeVector};

/// Projective space with rays `-e_1, ..., -e_n, e_1 + ... + e_n`; the first maximal cone is
/// `<-e_1, ..., -e_n>`.
pub fn projective_space(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| neg_unit(n, i)).collect();
    rays.push(vec![1; n]);
    let cones = crate::lattice::polytope::combinations(n + 1, n);
    Fan::from_i64(n, &rays, cones).expect("projective space fan")
}

/// `(P^1)^n` with rays `-e_1, ..., -e_n, e_1, ..., e_n`.
pub fn p1_power(n: usize) -> Fan {
    let mut rays: Vec<Vec<i64>> = (0..n).map(|i| neg_unit(n, i)).collect();
    rays.extend((0..n).map(|i| unit(n, i)));
    let cones = (0..1usize << n).map(|mask| (0..n).map(|i| if mask >> i & 1 == 1 { i + n } else { i }).collect()).collect();
    Fan::from_i64(n, &rays, cones).expect("(P^1)^n fan")
}

/// Hirzebruch surface `F_a` with rays `(-1,0), (0,-1), (1,a), (0,1)`.
pub fn hirzebruch(a: i64) -> Fan {
    Fan::from_i64(
        2,
        &[vec![-1, 0], vec![0, -1], vec![1, a], vec![0, 1]],
        vec![vec![0, 1], vec![1, 2], vec![2, 3], vec![3, 0]],
    )
    .expect("Hirzebruch fan")
}

/// Blow-up of the plane at the three torus-fixed points.
pub fn bl3_p2() -> Fan {
    let rays = [vec![1, 0], vec![1, 1], vec![0, 1], vec![-1, 0], vec![-1, -1], vec![0, -1]];
    let cones = (0..6).map(|i| vec![i, (i + 1) % 6]).collect();
    Fan::from_i64(2, &rays, cones).expect("hexagon fan")
}

/// The hexagon with vertices `(-1,-1), (0,-1), (1,0), (1,1), (0,1), (-1,0)`.
pub fn hexagon() -> LatticePolytope {
    LatticePolytope::from_i64(
        &[vec![0, -1], vec![1, -1], vec![1, 0], vec![0, 1], vec![-1, 1], vec![-1, 0]],
        &[1; 6],
    )
    .expect("hexagon")
}

/// `conv{(0,0), (1,0), (2,1), (0,1)}`, a polygon of `F_1` with transitive top vertices.
pub fn hirzebruch_trapezoid() -> LatticePolytope {
    LatticePolytope::from_i64(&[vec![-1, 0], vec![0, -1], vec![0, 1], vec![1, -1]], &[0, 0, 1, 1]).expect("trapezoid")
}

/// Standard-form polygon `{m >= 0, m_1 + a m_2 <= d, m_2 <= e}` of the class `d D_3 + e D_4` on `F_a`.
pub fn hirzebruch_section(a: i64, d: i64, e: i64) -> LatticePolytope {
    LatticePolytope::from_i64(&[vec![-1, 0], vec![0, -1], vec![1, a], vec![0, 1]], &[0, 0, d, e]).expect("F_a polygon")
}

fn unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = 1;
    v
}

fn neg_unit(n: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; n];
    v[i] = -1;
    v
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CatalogExample {
    ProjectiveSpace(usize),
    P1Power(usize),
    Hirzebruch(i64),
    Bl3P2,
    Box(Vec<i64>),
}

impl CatalogExample {
    pub fn fan(&self) -> Fan {
        match self {
            Self::ProjectiveSpace(n) => projective_space(*n),
            Self::P1Power(n) => p1_power(*n),
            Self::Hirzebruch(a) => hirzebruch(*a),
            Self::Bl3P2 => bl3_p2(),
            Self::Box(sides) => p1_power(sides.len()),
        }
    }

    /// A polytope of an ample class; standard-form whenever the variety is quasi-transitive.
    pub fn polytope(&self) -> LatticePolytope {
        match self {
            Self::ProjectiveSpace(n) => LatticePolytope::simplex(*n, 1),
            Self::P1Power(n) => LatticePolytope::cube(&vec![1; *n]),
            Self::Hirzebruch(a) => hirzebruch_section(*a, a + 1, 1),
            Self::Bl3P2 => hexagon(),
            Self::Box(sides) => LatticePolytope::cube(sides),
        }
    }

    /// Standard-form class of the polytope above (`None` for the non-quasi-transitive hexagon).
    pub fn default_class(&self) -> Option<Vec<BigInt>> {
        let v: Vec<i64> = match self {
            Self::ProjectiveSpace(_) => vec![1],
            Self::P1Power(n) => vec![1; *n],
            Self::Hirzebruch(a) => vec![a + 1, 1],
            Self::Bl3P2 => return None,
            Self::Box(sides) => sides.clone(),
        };
        Some(v.into_iter().map(BigInt::from).collect())
    }
}

impl FromStr for CatalogExample {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("unknown example {s:?}; expected pn:<n>, p1n:<n>, hirzebruch:<a>, bl3p2 or box:<a1>x<a2>..."));
        let positive = |x: &str| x.trim().parse::<usize>().ok().filter(|&n| n >= 1);
        let (kind, arg) = s.split_once(':').unwrap_or((s, ""));
        match kind.trim() {
            "pn" => positive(arg).map(Self::ProjectiveSpace).ok_or_else(bad),
            "p1n" => positive(arg).map(Self::P1Power).ok_or_else(bad),
            "hirzebruch" => arg.trim().parse::<i64>().ok().filter(|&a| a >= 0).map(Self::Hirzebruch).ok_or_else(bad),
            "bl3p2" if arg.is_empty() => Ok(Self::Bl3P2),
            "box" => {
                let sides: Option<Vec<i64>> =
                    arg.split('x').map(|t| t.trim().parse::<i64>().ok().filter(|&a| a >= 1)).collect();
                sides.filter(|v| !v.is_empty()).map(Self::Box).ok_or_else(bad)
            }
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for CatalogExample {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Self::ProjectiveSpace(n) => write!(f, "pn:{n}"),
            Self::P1Power(n) => write!(f, "p1n:{n}"),
            Self::Hirzebruch(a) => write!(f, "hirzebruch:{a}"),
            Self::Bl3P2 => f.write_str("bl3p2"),
            Self::Box(s) => {
                let parts: Vec<String> = s.iter().map(i64::to_string).collect();
                write!(f, "box:{}", parts.join("x"))
            }
        }
    }
}

/// A random smooth lattice polygon: a random smooth complete 2D fan (blow-ups of `P^2` or
/// `F_a`) with random ample offsets.
pub fn random_smooth_polygon<R: Rng>(rng: &mut R) -> LatticePolytope {
    loop {
        let mut rays: Vec<[i64; 2]> = match rng.gen_range(0..4) {
            0 => vec![[1, 0], [0, 1], [-1, -1]],
            a => vec![[1, 0], [0, 1], [-1, a - 1], [0, -1]],
        };
        for _ in 0..rng.gen_range(0..=3) {
            let i = rng.gen_range(0..rays.len());
            let j = (i + 1) % rays.len();
            let new = [rays[i][0] + rays[j][0], rays[i][1] + rays[j][1]];
            rays.insert(i + 1, new);
        }
        let k = rays.len();
        // u_{i-1} + u_{i+1} = a_i u_i for a smooth complete fan
        let self_int: Vec<i64> = (0..k)
            .map(|i| {
                let (p, c, nx) = (rays[(i + k - 1) % k], rays[i], rays[(i + 1) % k]);
                let s = [p[0] + nx[0], p[1] + nx[1]];
                if c[0] != 0 { s[0] / c[0] } else { s[1] / c[1] }
            })
            .collect();
        for _ in 0..2000 {
            let b: Vec<i64> = (0..k).map(|_| rng.gen_range(0..=6)).collect();
            let ample = (0..k).all(|i| b[(i + k - 1) % k] + b[(i + 1) % k] - self_int[i] * b[i] > 0);
            if ample {
                let normals: Vec<LatticeVector> = rays.iter().map(|r| LatticeVector::from_i64s(r)).collect();
                return LatticePolytope::new(2, normals, b.into_iter().map(BigInt::from).collect())
                    .expect("complete fan gives a bounded polygon");
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lattice::validate_fan;
    use rand::SeedableRng;

    #[test]
    fn catalog_fans_are_valid() {
        for ex in ["pn:1", "pn:2", "pn:3", "pn:4", "p1n:1", "p1n:3", "p1n:4", "hirzebruch:0", "hirzebruch:1", "hirzebruch:3", "bl3p2", "box:2x1"] {
            let ex: CatalogExample = ex.parse().unwrap();
            let r = validate_fan(&ex.fan());
            assert!(r.is_valid() && r.smooth, "{ex}: {r:?}");
        }
    }

    #[test]
    fn example_names_round_trip() {
        for s in ["pn:3", "p1n:7", "hirzebruch:2", "bl3p2", "box:2x1x3"] {
            assert_eq!(s.parse::<CatalogExample>().unwrap().to_string(), s);
        }
        for s in ["pn:0", "qn:2", "box:", "box:1x0", "hirzebruch:-1", "bl3p2:1"] {
            assert!(s.parse::<CatalogExample>().is_err(), "{s}");
        }
    }

    #[test]
    fn random_polygons_are_smooth_lattice_polygons() {
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let p = random_smooth_polygon(&mut rng);
            assert!(p.is_full_dimensional());
            let fan = p.normal_fan().unwrap();
            let r = validate_fan(&fan);
            assert!(r.is_valid() && r.smooth, "{r:?}");
            for v in p.vertices() {
                assert!(v.iter().all(|x| x.is_integer()));
            }
        }
    }
}
