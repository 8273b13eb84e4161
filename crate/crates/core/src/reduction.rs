//! Changes of basis that put a differential `d: M2<gamma_i> -> M2<nu>` into
//! normal form.
//!
//! Both reductions only ever replace a generator `gamma_b` by
//! `chi_b = gamma_b + c * gamma_a` where `gamma_a` is itself left untouched,
//! so every change is a product of elementary substitutions and preserves the
//! multiset of generator bidegrees.

use crate::error::{Error, Result};
use crate::module::{Differential, FreeModule, Generator, GradedMap};
use crate::ring::{Bidegree, M2Elem, Monomial};

/// Result of clearing a differential that hits the top cone of `nu`.
#[derive(Clone, Debug)]
pub struct TopConeReduction {
    pub new_basis: FreeModule,
    /// Old basis -> new basis (each old generator written in the new basis).
    pub change: GradedMap,
    /// New basis -> old basis (each new generator written in the old basis).
    pub lift: GradedMap,
    pub lambda: String,
    /// `d(lambda) = tau^k0 nu`.
    pub k0: u32,
    /// The differential in the new basis; only `lambda` supports it.
    pub reduced: Differential,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RampStep {
    pub label: String,
    /// `d(omega) = theta / (rho^j tau^k) nu`.
    pub j: u32,
    pub k: u32,
}

/// Result of reducing a bottom-cone differential to a ramp.
#[derive(Clone, Debug)]
pub struct RampReduction {
    pub new_basis: FreeModule,
    pub change: GradedMap,
    pub lift: GradedMap,
    /// Supporting generators ordered by increasing topological dimension.
    pub ramp: Vec<RampStep>,
    pub reduced: Differential,
}

/// Fresh label for a modified generator at basis position `index` (0-based).
pub(crate) fn chi_label(index: usize, nu: &str) -> String {
    format!("chi{}_{nu}", index + 1)
}

/// Every source generator must satisfy `Top <= p`, and `Top = p` forces
/// `wt <= q`, where `(p, q) = deg(nu)`.
pub fn check_hypothesis(d: &Differential) -> Result<()> {
    let nu = d.nu().deg;
    for g in d.source().gens() {
        if g.deg.p > nu.p || (g.deg.p == nu.p && g.deg.q > nu.q) {
            return Err(Error::PreconditionViolated(format!(
                "generator {} at {} lies beyond the new cell {}",
                g.label, g.deg, nu
            )));
        }
    }
    Ok(())
}

/// A substitution `new_label = old_label + coeff * pivot` with the pivot kept.
struct Substitution {
    old: String,
    new: String,
    pivot: String,
    coeff: Monomial,
}

/// Builds the new basis and both change-of-basis maps.
fn apply_substitutions(
    old: &FreeModule,
    subs: &[Substitution],
) -> Result<(FreeModule, GradedMap, GradedMap)> {
    let rename = |label: &str| {
        subs.iter()
            .find(|s| s.old == label)
            .map_or_else(|| label.to_owned(), |s| s.new.clone())
    };
    let new_basis = FreeModule::new(
        old.gens()
            .iter()
            .map(|g| Generator::new(rename(&g.label), g.deg))
            .collect(),
    )?;
    let zero = Bidegree::default();
    let mut change = GradedMap::zero(old.clone(), new_basis.clone(), zero);
    let mut lift = GradedMap::zero(new_basis.clone(), old.clone(), zero);
    for g in old.gens() {
        let new = rename(&g.label);
        change.set(&g.label, &new, M2Elem::ONE)?;
        lift.set(&new, &g.label, M2Elem::ONE)?;
    }
    for s in subs {
        change.set(&s.old, &s.pivot, s.coeff.into())?;
        lift.set(&s.new, &s.pivot, s.coeff.into())?;
    }
    Ok((new_basis, change, lift))
}

fn reduced_differential(
    new_basis: &FreeModule,
    nu: &Generator,
    supports: &[(String, Monomial)],
) -> Result<Differential> {
    Differential::from_images(
        new_basis,
        nu.clone(),
        supports.iter().map(|(l, m)| (l.as_str(), M2Elem::from(*m))),
    )
}

/// Finds a basis in which a single generator `lambda` carries the whole
/// differential.
///
/// `lambda` is a top-cone supporter of minimal weight (earliest in basis
/// order on ties). Every other top supporter `gamma_i` with image
/// `tau^k_i nu` becomes `gamma_i + tau^(k_i - k0) lambda`, and every bottom
/// supporter with image `theta/(rho^j tau^k) nu` becomes
/// `gamma_i + theta/(rho^j tau^(k + k0)) lambda`.
pub fn reduce_top_cone(d: &Differential) -> Result<TopConeReduction> {
    check_hypothesis(d)?;
    let source = d.source();
    let nu = d.nu();

    let mut lambda: Option<(usize, u32)> = None;
    for (i, g) in source.gens().iter().enumerate() {
        if let Some(Monomial::Top { rho, tau }) = d.coefficient(&g.label).monomial() {
            if rho != 0 {
                return Err(Error::InvariantViolated(format!(
                    "top-cone image of {} has a rho factor",
                    g.label
                )));
            }
            if lambda.is_none_or(|(_, k0)| tau < k0) {
                lambda = Some((i, tau));
            }
        }
    }
    let (li, k0) = lambda.ok_or(Error::NoTopImage)?;
    let lambda = source.gens()[li].label.clone();

    let mut subs = Vec::new();
    for (i, g) in source.gens().iter().enumerate() {
        if i == li {
            continue;
        }
        let coeff = match d.coefficient(&g.label).monomial() {
            None => continue,
            Some(Monomial::Top { tau, .. }) => Monomial::top(0, tau - k0),
            Some(Monomial::Bottom { rho, tau }) => Monomial::bottom(rho, tau + k0),
        };
        subs.push(Substitution {
            old: g.label.clone(),
            new: chi_label(i, &nu.label),
            pivot: lambda.clone(),
            coeff,
        });
    }
    let (new_basis, change, lift) = apply_substitutions(source, &subs)?;
    let reduced = reduced_differential(&new_basis, nu, &[(lambda.clone(), Monomial::top(0, k0))])?;
    Ok(TopConeReduction {
        new_basis,
        change,
        lift,
        lambda,
        k0,
        reduced,
    })
}

/// Reduces a differential with image only in the bottom cone of `nu` until
/// its supporters form a ramp: strictly increasing topological dimension and
/// strictly increasing fixed-set dimension.
///
/// Supporters are scanned by increasing `Top`, then decreasing `fix`, then
/// basis order. A supporter `gamma_b` lying in the upper cone of an earlier
/// kept supporter `gamma_a` (so `j_a >= j_b` and `k_a >= k_b`) is replaced by
/// `rho^(j_a - j_b) tau^(k_a - k_b) gamma_a + gamma_b`.
pub fn reduce_bottom_cone(d: &Differential) -> Result<RampReduction> {
    check_hypothesis(d)?;
    let source = d.source();
    let nu = d.nu();

    struct Supporter {
        index: usize,
        deg: Bidegree,
        j: u32,
        k: u32,
    }
    let mut supporters = Vec::new();
    for (index, g) in source.gens().iter().enumerate() {
        match d.coefficient(&g.label).monomial() {
            None => {}
            Some(Monomial::Bottom { rho, tau }) => supporters.push(Supporter {
                index,
                deg: g.deg,
                j: rho,
                k: tau,
            }),
            Some(m @ Monomial::Top { .. }) => {
                return Err(Error::PreconditionViolated(format!(
                    "d({}) = {m} nu touches the top cone",
                    g.label
                )))
            }
        }
    }
    supporters.sort_by_key(|s| (s.deg.p, std::cmp::Reverse(s.deg.fix()), s.index));

    let mut kept: Vec<&Supporter> = Vec::new();
    let mut subs = Vec::new();
    for b in &supporters {
        let pivot = kept
            .iter()
            .find(|a| a.deg.p <= b.deg.p && a.deg.fix() >= b.deg.fix());
        match pivot {
            Some(a) => {
                if a.j < b.j || a.k < b.k {
                    return Err(Error::InvariantViolated(
                        "comparable supporters with non-dominating exponents".into(),
                    ));
                }
                subs.push(Substitution {
                    old: source.gens()[b.index].label.clone(),
                    new: chi_label(b.index, &nu.label),
                    pivot: source.gens()[a.index].label.clone(),
                    coeff: Monomial::top(a.j - b.j, a.k - b.k),
                });
            }
            None => kept.push(b),
        }
    }

    let ramp: Vec<RampStep> = kept
        .iter()
        .map(|s| RampStep {
            label: source.gens()[s.index].label.clone(),
            j: s.j,
            k: s.k,
        })
        .collect();
    let (new_basis, change, lift) = apply_substitutions(source, &subs)?;
    let supports: Vec<_> = ramp
        .iter()
        .map(|r| (r.label.clone(), Monomial::bottom(r.j, r.k)))
        .collect();
    let reduced = reduced_differential(&new_basis, nu, &supports)?;
    Ok(RampReduction {
        new_basis,
        change,
        lift,
        ramp,
        reduced,
    })
}

/// Whether the steps satisfy `j_i > j_(i+1)` and `k_i < k_(i+1)`.
pub fn is_strict_ramp(ramp: &[RampStep]) -> bool {
    ramp.windows(2).all(|w| w[0].j > w[1].j && w[0].k < w[1].k)
}
