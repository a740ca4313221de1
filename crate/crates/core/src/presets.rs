//! Ready-made presentations: projective spaces, products of them, Grassmannians.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::git_model::{GitPresentation, PresentationData};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PresetId {
    /// `ℂⁿ // ℂ*`, i.e. `P^{n-1}`.
    Projective(usize),
    /// `P^{n₁-1} × … × P^{n_k-1}`.
    ProductProjective(Vec<usize>),
    /// `Gr(r, n) = Mat_{r×n} // GL_r`.
    Grassmannian(usize, usize),
    Custom(PathBuf),
}

impl PresetId {
    pub fn build(&self) -> Result<GitPresentation> {
        match self {
            PresetId::Projective(n) => product(&[*n]),
            PresetId::ProductProjective(ns) => product(ns),
            PresetId::Grassmannian(r, n) => grassmannian(*r, *n),
            PresetId::Custom(path) => GitPresentation::load(path),
        }
    }
}

/// Command-line notation: `p:n` is `Pⁿ`, `pp:a,b,…` is `P^a × P^b × …`,
/// `gr:r,n` is `Gr(r, n)`.
impl FromStr for PresetId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidPreset(format!("cannot parse preset `{s}` (expected p:n, pp:a,b,... or gr:r,n)"));
        let (kind, args) = s.split_once(':').ok_or_else(bad)?;
        let nums: Vec<usize> = args
            .split(',')
            .map(|a| a.trim().parse::<usize>())
            .collect::<std::result::Result<_, _>>()
            .map_err(|_| bad())?;
        match (kind.trim(), nums.as_slice()) {
            ("p", &[n]) => Ok(PresetId::Projective(n + 1)),
            ("pp", ns) if !ns.is_empty() => Ok(PresetId::ProductProjective(ns.iter().map(|n| n + 1).collect())),
            ("gr", &[r, n]) => Ok(PresetId::Grassmannian(r, n)),
            _ => Err(bad()),
        }
    }
}

impl fmt::Display for PresetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PresetId::Projective(n) => write!(f, "p:{}", n.saturating_sub(1)),
            PresetId::ProductProjective(ns) => {
                let parts: Vec<String> = ns.iter().map(|n| n.saturating_sub(1).to_string()).collect();
                write!(f, "pp:{}", parts.join(","))
            }
            PresetId::Grassmannian(r, n) => write!(f, "gr:{r},{n}"),
            PresetId::Custom(p) => write!(f, "custom:{}", p.display()),
        }
    }
}

fn unit(r: usize, i: usize) -> Vec<i64> {
    let mut v = vec![0; r];
    v[i] = 1;
    v
}

fn product(ns: &[usize]) -> Result<GitPresentation> {
    if ns.is_empty() || ns.iter().any(|&n| n < 2) {
        return Err(Error::InvalidPreset(format!("projective factors need at least 2 coordinates, got {ns:?}")));
    }
    let r = ns.len();
    let weights = ns.iter().enumerate().flat_map(|(i, &n)| std::iter::repeat_n(unit(r, i), n)).collect();
    let label = ns.iter().map(|n| format!("P^{}", n - 1)).collect::<Vec<_>>().join(" x ");
    GitPresentation::new(PresentationData {
        rank: r,
        weights,
        positive_roots: vec![],
        weyl_order: 1,
        weyl_generators: None,
        stability: vec![1; r],
        degree_basis: (0..r).map(|i| unit(r, i)).collect(),
        effective_cone_generators: None,
        label,
    })
}

fn grassmannian(r: usize, n: usize) -> Result<GitPresentation> {
    if r < 1 || r >= n {
        return Err(Error::InvalidPreset(format!("Gr({r},{n}) needs 1 <= r < n")));
    }
    let weights = (0..r).flat_map(|i| std::iter::repeat_n(unit(r, i), n)).collect();
    let mut roots = Vec::new();
    for i in 0..r {
        for j in i + 1..r {
            let mut a = unit(r, i);
            a[j] = -1;
            roots.push(a);
        }
    }
    let generators = (0..r.saturating_sub(1))
        .map(|k| {
            (0..r)
                .map(|i| {
                    let src = if i == k { k + 1 } else if i == k + 1 { k } else { i };
                    unit(r, src)
                })
                .collect()
        })
        .collect();
    let order: u64 = (1..=r as u64).product();
    GitPresentation::new(PresentationData {
        rank: r,
        weights,
        positive_roots: roots,
        weyl_order: order,
        weyl_generators: Some(generators),
        stability: vec![1; r],
        degree_basis: vec![vec![1; r]],
        effective_cone_generators: None,
        label: format!("Gr({r},{n})"),
    })
}

/// `(syntax, description)` for every built-in family.
pub fn catalogue() -> Vec<(&'static str, &'static str)> {
    vec![
        ("p:n", "projective space P^n = C^(n+1) // C*"),
        ("pp:a,b,...", "product P^a x P^b x ... of projective spaces"),
        ("gr:r,n", "Grassmannian Gr(r,n) = Mat(r x n) // GL(r), 1 <= r < n"),
        ("--custom FILE", "presentation JSON (rank, weights, positive_roots, weyl_order, stability, degree_basis, ...)"),
    ]
}
