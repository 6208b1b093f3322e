//! Builtin group catalog and group-spec files.

use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::error::{Error, Result};
use crate::group::{generate_group, GroupTable};
use crate::perm::Permutation;

/// Build a catalog group by family name and parameter.
///
/// Families: `cyclic` (Cn), `dihedral` (D2n, order 2n), `symmetric` (Sn),
/// `alternating` (An), `quaternion` (Q8, parameter must be 8).
pub fn builtin_group(family: &str, n: usize, cfg: &RunConfig) -> Result<GroupTable> {
    match family {
        "cyclic" => cyclic(n, cfg),
        "dihedral" => dihedral(n, cfg),
        "symmetric" => symmetric(n, cfg),
        "alternating" => alternating(n, cfg),
        "quaternion" => {
            if n != 8 {
                return Err(Error::UnknownFamily(format!("quaternion:{n} (only Q8)")));
            }
            quaternion8()
        }
        other => Err(Error::UnknownFamily(other.to_string())),
    }
}

fn cyclic(n: usize, cfg: &RunConfig) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::UnknownFamily("cyclic:0".into()));
    }
    if n == 1 {
        return GroupTable::from_mult_table(vec![vec![0]], "C1");
    }
    let rot = Permutation::new((0..n).map(|i| (i + 1) % n).collect())?;
    generate_group(&[rot], &format!("C{n}"), cfg)
}

fn dihedral(n: usize, cfg: &RunConfig) -> Result<GroupTable> {
    if n < 2 {
        return Err(Error::UnknownFamily(format!("dihedral:{n} (need n >= 2)")));
    }
    let rot = Permutation::new((0..n).map(|i| (i + 1) % n).collect())?;
    let refl = Permutation::new((0..n).map(|i| (n - i) % n).collect())?;
    generate_group(&[rot, refl], &format!("D{n}"), cfg)
}

fn symmetric(n: usize, cfg: &RunConfig) -> Result<GroupTable> {
    if n == 0 {
        return Err(Error::UnknownFamily("symmetric:0".into()));
    }
    if n == 1 {
        return GroupTable::from_mult_table(vec![vec![0]], "S1");
    }
    let mut swap: Vec<usize> = (0..n).collect();
    swap.swap(0, 1);
    let cycle = Permutation::new((0..n).map(|i| (i + 1) % n).collect())?;
    generate_group(&[Permutation::new(swap)?, cycle], &format!("S{n}"), cfg)
}

fn alternating(n: usize, cfg: &RunConfig) -> Result<GroupTable> {
    if n < 3 {
        return Err(Error::UnknownFamily(format!("alternating:{n} (need n >= 3)")));
    }
    let tri = Permutation::from_cycles(n, &[vec![0, 1, 2]])?;
    let long = if n % 2 == 1 {
        Permutation::from_cycles(n, &[(0..n).collect()])?
    } else {
        Permutation::from_cycles(n, &[(1..n).collect()])?
    };
    generate_group(&[tri, long], &format!("A{n}"), cfg)
}

/// Q8 from its multiplication rules, elements 1, -1, i, -i, j, -j, k, -k.
fn quaternion8() -> Result<GroupTable> {
    // element = (axis, sign): axis 0 is the scalar 1, axes 1..4 are i, j, k
    let enc = |axis: usize, neg: bool| -> usize { 2 * axis + usize::from(neg) };
    let unit_mul = |a: usize, b: usize| -> (usize, bool) {
        match (a, b) {
            (0, x) => (x, false),
            (x, 0) => (x, false),
            (x, y) if x == y => (0, true), // i² = j² = k² = -1
            (1, 2) => (3, false),          // ij = k
            (2, 3) => (1, false),          // jk = i
            (3, 1) => (2, false),          // ki = j
            (2, 1) => (3, true),
            (3, 2) => (1, true),
            (1, 3) => (2, true),
            _ => unreachable!(),
        }
    };
    let mut table = vec![vec![0usize; 8]; 8];
    for a in 0..4 {
        for sa in [false, true] {
            for b in 0..4 {
                for sb in [false, true] {
                    let (c, sc) = unit_mul(a, b);
                    table[enc(a, sa)][enc(b, sb)] = enc(c, sc ^ sa ^ sb);
                }
            }
        }
    }
    let mut g = GroupTable::from_mult_table(table, "Q8")?;
    g.element_labels = Some(
        ["1", "-1", "i", "-i", "j", "-j", "k", "-k"]
            .iter()
            .map(|s| s.to_string())
            .collect(),
    );
    Ok(g)
}

/// Group-spec file contents: explicit generators, a catalog entry, or a
/// direct product of two sub-specs.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(untagged)]
pub enum GroupSpec {
    Generators {
        degree: usize,
        generators: Vec<Vec<usize>>,
        #[serde(default)]
        name: Option<String>,
    },
    Catalog {
        catalog: String,
        param: usize,
    },
    Product {
        product: Vec<GroupSpec>,
    },
}

impl GroupSpec {
    pub fn build(&self, cfg: &RunConfig) -> Result<GroupTable> {
        match self {
            GroupSpec::Generators {
                degree,
                generators,
                name,
            } => {
                let perms = generators
                    .iter()
                    .map(|images| {
                        if images.len() != *degree {
                            return Err(Error::DegreeMismatch(*degree, images.len()));
                        }
                        Permutation::new(images.clone())
                    })
                    .collect::<Result<Vec<_>>>()?;
                generate_group(&perms, name.as_deref().unwrap_or("G"), cfg)
            }
            GroupSpec::Catalog { catalog, param } => builtin_group(catalog, *param, cfg),
            GroupSpec::Product { product } => {
                if product.len() != 2 {
                    return Err(Error::FormatError(
                        "product spec needs exactly two factors".into(),
                    ));
                }
                let a = product[0].build(cfg)?;
                let b = product[1].build(cfg)?;
                a.direct_product(&b, cfg)
            }
        }
    }

    /// Parse a CLI group argument: either a file path or a catalog string
    /// `family:param` / `product:f1:p1:f2:p2`.
    pub fn parse_cli(arg: &str) -> Result<GroupSpec> {
        if std::path::Path::new(arg).is_file() {
            let text = std::fs::read_to_string(arg)?;
            return Ok(serde_json::from_str(&text)?);
        }
        let parts: Vec<&str> = arg.split(':').collect();
        let param = |s: &str| -> Result<usize> {
            s.parse()
                .map_err(|_| Error::FormatError(format!("bad group parameter `{s}`")))
        };
        match parts.as_slice() {
            [family, p] => Ok(GroupSpec::Catalog {
                catalog: family.to_string(),
                param: param(p)?,
            }),
            ["product", f1, p1, f2, p2] => Ok(GroupSpec::Product {
                product: vec![
                    GroupSpec::Catalog {
                        catalog: f1.to_string(),
                        param: param(p1)?,
                    },
                    GroupSpec::Catalog {
                        catalog: f2.to_string(),
                        param: param(p2)?,
                    },
                ],
            }),
            _ => Err(Error::FormatError(format!(
                "cannot parse group spec `{arg}` (expected a file or family:param)"
            ))),
        }
    }
}

/// The desk-scale catalog used by sweeps and the acceptance suite:
/// cyclic n ≤ 64, dihedral n ≤ 32, S3–S6, A4–A5, Q8 and two direct products,
/// all of order ≤ 1000.
pub fn standard_catalog(cfg: &RunConfig) -> Result<Vec<GroupTable>> {
    let mut groups = Vec::new();
    for n in 1..=64 {
        groups.push(builtin_group("cyclic", n, cfg)?);
    }
    for n in 2..=32 {
        groups.push(builtin_group("dihedral", n, cfg)?);
    }
    for n in 3..=6 {
        groups.push(builtin_group("symmetric", n, cfg)?);
    }
    for n in 4..=5 {
        groups.push(builtin_group("alternating", n, cfg)?);
    }
    groups.push(builtin_group("quaternion", 8, cfg)?);
    let c2 = builtin_group("cyclic", 2, cfg)?;
    let s3 = builtin_group("symmetric", 3, cfg)?;
    groups.push(c2.direct_product(&s3, cfg)?);
    let q8 = builtin_group("quaternion", 8, cfg)?;
    let c3 = builtin_group("cyclic", 3, cfg)?;
    groups.push(q8.direct_product(&c3, cfg)?);
    Ok(groups)
}
