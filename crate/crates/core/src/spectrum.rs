//! Eigenvalue ladders of the chains from the boundary conditions on Φ.
//!
//! Energies are handled in reduced form `h = H/(2ħμ)`. A chain with `n`
//! Hamiltonians carries labels `m, q, p, l` (first `n` of them) and every
//! reduced energy is `h_i = L_i + c_i(μ)`. Each link is a two-dimensional
//! subsystem with `A = h_j`, possibly shifted by the Hamiltonian below it, and
//! a new Hamiltonian `h_{j+1}`. Inside one representation the eigenvalue of `A`
//! runs over `bottom + σ·x`, `x = 0..=N`, and the boundary conditions
//! `Φ(0) = Φ(N+1) = 0` fix `bottom` and the new eigenvalue.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::AlgebraError;
use crate::parse::poly;
use crate::phase::{substitute, Bindings};
use crate::poly::PhasePoly;
use crate::reference::{CSYSTEM_PHI, QSYSTEM_PHI};
use crate::scalar::Scalar;
use crate::systems::{link_specs, ChainLabel, Family, LinkSpec};
use crate::vars::VarTable;

/// Label names, outermost last.
pub const LABELS: [&str; 4] = ["m", "q", "p", "l"];

const SYMBOLS: [&str; 23] = [
    "x", "N", "a", "m", "q", "p", "l", "mu1", "mu2", "mu3", "mu4", "h1", "h2", "h3", "h4", "hbar", "nu", "nu1", "nu2",
    "r", "s", "H", "y",
];

/// How far apart neighbouring eigenvalues of `A` sit inside one representation.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Spacing {
    /// `A = √δ(N + u)` (cubic) or `√ε(N + u)` (quadratic), as in the realization.
    Oscillator,
    /// One unit of `h`, i.e. `2ħμ`, whatever the subsystem.
    Unit,
}

impl Spacing {
    pub fn name(self) -> &'static str {
        match self {
            Spacing::Oscillator => "oscillator",
            Spacing::Unit => "unit",
        }
    }
}

pub fn spectrum_table() -> Arc<VarTable> {
    VarTable::with_laurent_params(&[], &[], &SYMBOLS, &["nu"]).expect("static table")
}

fn mu_name(i: usize) -> String {
    format!("mu{i}")
}

fn h_name(i: usize) -> String {
    format!("h{i}")
}

fn var(vt: &Arc<VarTable>, name: &str) -> PhasePoly {
    PhasePoly::var(vt, name)
}

fn cst(vt: &Arc<VarTable>, c: Scalar) -> PhasePoly {
    PhasePoly::from_scalar(vt, c)
}

fn subs(p: &PhasePoly, pairs: &[(&str, PhasePoly)]) -> PhasePoly {
    let mut b = Bindings::new(p.table());
    for (n, v) in pairs {
        b = b.bind(n, v.clone());
    }
    substitute(p, &b).expect("polynomial substitution")
}

/// `p = c·v + rest` with constant `c`; fails above degree one.
fn affine(p: &PhasePoly, v: &str) -> Result<(Scalar, PhasePoly), String> {
    let i = p.table().index(v).expect("known symbol");
    let mut parts = p.collect_in(i);
    let rest = parts.remove(&0).unwrap_or_else(|| PhasePoly::zero(p.table()));
    let c = match parts.remove(&1) {
        None => Scalar::zero(),
        Some(c) if c.is_constant() => c.constant_term(),
        Some(c) => return Err(format!("coefficient of {v} in {p} is not constant: {c}")),
    };
    if !parts.is_empty() {
        return Err(format!("{p} is not affine in {v}"));
    }
    Ok((c, rest))
}

fn involves_any(p: &PhasePoly, names: &[&str]) -> bool {
    names.iter().any(|n| p.table().index(n).is_some_and(|i| p.involves(i)))
}

/// `μ_i > above`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub mu: usize,
    pub above: Scalar,
}

/// One subsystem of a chain, read off the chain layout.
#[derive(Clone, Debug)]
pub struct LinkInput {
    pub family: Family,
    /// Position in the chain: `A = h_{index+1}`, new Hamiltonian `h_{index+2}`.
    pub index: usize,
    /// `ν/μ`, the square root of the coupling multiplier.
    pub nu: i64,
    /// Chain indices of the couplings written through `ν₁`, `ν₂`.
    pub nu1: usize,
    pub nu2: usize,
    /// Whether the shift parameter is bound to the Hamiltonian below `A`.
    pub shifted: bool,
}

impl LinkInput {
    pub fn from_spec(index: usize, spec: &LinkSpec) -> Result<Self, AlgebraError> {
        let nu = (1..=spec.scale).find(|n| n * n == spec.scale).ok_or_else(|| {
            AlgebraError::Inconsistent(format!("coupling multiplier {} is not a square", spec.scale))
        })?;
        Ok(LinkInput {
            family: spec.family,
            index,
            nu,
            nu1: spec.couplings.0,
            nu2: spec.couplings.1,
            shifted: spec.shift.is_some(),
        })
    }
}

/// What the previous link fixed.
#[derive(Clone, Debug)]
pub struct Inherited {
    /// Reduced energy of the Hamiltonian below `A`, over the labels.
    pub lower: PhasePoly,
    /// `c_A` with `h_A = L_A + c_A`.
    pub a_offset: PhasePoly,
}

/// One pairing of a root at `x = 0` with a root at `x = N + 1`.
#[derive(Clone, Debug)]
pub struct Branch {
    /// Reduced eigenvalue of `A` at `x = 0`, over the lower `h` and `μ`.
    pub bottom: PhasePoly,
    /// The same root in the oscillator variable, `u = bottom/step`.
    pub root: PhasePoly,
    /// Reduced eigenvalue of the new Hamiltonian, over `N`, the lower `h` and `μ`.
    pub top: PhasePoly,
    /// Factors of Φ (units `ħ = μ = 1`) over `x`, `N` and `μ`.
    pub factors: Vec<PhasePoly>,
    pub bounds: Vec<Bound>,
    /// Conditions `c > 0` mixing several couplings.
    pub conditions: Vec<PhasePoly>,
    /// `b` in `L_A = L_lower + σx + b`.
    pub offset: Option<Scalar>,
    pub rejected: Option<String>,
}

impl Branch {
    pub fn accepted(&self) -> bool {
        self.rejected.is_none()
    }
}

#[derive(Clone, Debug)]
pub struct LinkSolution {
    pub input: LinkInput,
    pub spacing: Spacing,
    /// Step `σ` of the reduced `A` eigenvalue.
    pub step: Scalar,
    /// Constant in front of the factors (units `ħ = μ = 1`).
    pub prefactor: Scalar,
    /// Powers of `ħ` and `μ` stripped from Φ.
    pub units: &'static str,
    pub branches: Vec<Branch>,
    /// Accepted branches by increasing offset; the first is the selected one.
    pub kept: Vec<usize>,
    pub a_offset: PhasePoly,
    pub top_offset: PhasePoly,
}

impl LinkSolution {
    pub fn selected(&self) -> &Branch {
        &self.branches[self.kept[0]]
    }

    pub fn kept_branches(&self) -> impl Iterator<Item = &Branch> {
        self.kept.iter().map(|&i| &self.branches[i])
    }

    pub fn rejected_branches(&self) -> impl Iterator<Item = &Branch> {
        self.branches.iter().filter(|b| !b.accepted())
    }

    /// Φ of a branch over `x`, `N`, `μ`.
    pub fn phi(&self, b: &Branch) -> PhasePoly {
        let vt = b.bottom.table();
        b.factors.iter().fold(cst(vt, self.prefactor.clone()), |acc, f| acc.mul_poly(f))
    }

    fn label_of_a(&self) -> &'static str {
        LABELS[self.input.index]
    }

    fn lower_label(&self, vt: &Arc<VarTable>) -> PhasePoly {
        match self.input.index {
            0 => PhasePoly::zero(vt),
            j => var(vt, LABELS[j - 1]),
        }
    }

    /// Φ of a kept branch over the labels.
    pub fn phi_in_labels(&self, b: &Branch) -> PhasePoly {
        let vt = b.bottom.table().clone();
        let off = cst(&vt, b.offset.clone().expect("kept branches carry an offset"));
        let inv = cst(&vt, self.step.recip());
        let low = self.lower_label(&vt);
        let x = var(&vt, self.label_of_a()).sub_poly(&low).sub_poly(&off).mul_poly(&inv);
        let n = var(&vt, LABELS[self.input.index + 1]).sub_poly(&low).sub_poly(&off).mul_poly(&inv);
        subs(&self.phi(b), &[("x", x), ("N", n)])
    }

    /// Eigenvalue of `A` at `x = 0` of a kept branch, over the labels.
    pub fn bottom_in_labels(&self, b: &Branch) -> PhasePoly {
        let vt = b.bottom.table().clone();
        self.lower_label(&vt)
            .add_poly(&self.a_offset)
            .add_poly(&cst(&vt, b.offset.clone().expect("kept branches carry an offset")))
    }
}

/// Sign analysis of `prefactor · Π factors` on `1 ≤ x ≤ N`.
///
/// The region is the cone at `(1, 1)` spanned by `(0, 1)` and `(1, 1)`; an
/// affine factor keeps one sign there iff its two ray slopes do and its apex
/// value has that sign.
fn positivity(prefactor: &Scalar, factors: &[PhasePoly]) -> Result<(Vec<Bound>, Vec<PhasePoly>), String> {
    let vt = factors[0].table().clone();
    let one = cst(&vt, Scalar::one());
    let mut negative = prefactor.is_negative();
    let mut bounds: BTreeMap<usize, Scalar> = BTreeMap::new();
    let mut conditions = Vec::new();
    for f in factors {
        let (alpha, rest) = affine(f, "x")?;
        let (beta, _) = affine(&rest, "N")?;
        let rays = [beta.clone(), &alpha + &beta];
        let apex = subs(f, &[("x", one.clone()), ("N", one.clone())]);
        let up = rays.iter().any(|r| r.is_positive());
        let down = rays.iter().any(|r| r.is_negative());
        let flip = match (up, down) {
            (true, true) => return Err(format!("factor {f} changes sign along the ladder")),
            (true, false) => false,
            (false, true) => true,
            (false, false) => apex.is_constant() && apex.constant_term().is_negative(),
        };
        let cond = if flip { apex.neg_poly() } else { apex };
        negative ^= flip;
        if cond.is_constant() {
            if !cond.constant_term().is_positive() {
                return Err(format!("factor {f} vanishes or is negative at an interior point"));
            }
            continue;
        }
        let mus: Vec<usize> = (1..=4).filter(|&i| involves_any(&cond, &[&mu_name(i)])).collect();
        let mut coeffs = Vec::new();
        for &i in &mus {
            let (c, _) = affine(&cond, &mu_name(i))?;
            if c.is_negative() {
                return Err(format!("positivity needs {cond} > 0, an upper bound on mu{i}"));
            }
            coeffs.push(c);
        }
        if mus.len() == 1 {
            let (c, rest) = affine(&cond, &mu_name(mus[0]))?;
            let above = -(&rest.constant_term() / &c);
            let e = bounds.entry(mus[0]).or_insert_with(|| above.clone());
            if above > *e {
                *e = above;
            }
        } else {
            conditions.push(cond);
        }
    }
    if negative {
        return Err("Φ is negative on the interior".into());
    }
    Ok((bounds.into_iter().map(|(mu, above)| Bound { mu, above }).collect(), conditions))
}

/// Boundary conditions of one link.
///
/// `inherited` is `None` for the first link of a chain. Branches are all
/// pairings of a zero of a factor free of the new Hamiltonian at `x = 0` with
/// a zero of a factor containing it at `x = N + 1`. A branch is kept when Φ is
/// positive on the interior for all couplings above some lower bounds and its
/// lowest `A` eigenvalue sits on the inherited ladder; among kept branches of
/// the same residue modulo `σ` only the lowest survives.
pub fn solve_boundary(
    vt: &Arc<VarTable>,
    input: &LinkInput,
    inherited: Option<&Inherited>,
    spacing: Spacing,
) -> Result<LinkSolution, AlgebraError> {
    let j = input.index;
    if input.shifted != inherited.is_some() {
        return Err(AlgebraError::Inconsistent(format!("link {} needs the eigenvalue below A", j + 1)));
    }
    let h_low = h_name(j);
    let h_top = h_name(j + 2);
    let nu = Scalar::from_int(input.nu);
    let (srcs, osc_step, pref_src, units): (&[&str], Scalar, &str, &'static str) = match input.family {
        Family::Cubic => (&CSYSTEM_PHI.1, Scalar::from_int(2 * input.nu), CSYSTEM_PHI.0, "hbar^10*mu^6"),
        Family::Quadratic => (&QSYSTEM_PHI.1, nu.clone(), QSYSTEM_PHI.0, "hbar^4"),
    };
    let shift =
        if input.shifted { var(vt, &h_low).scale_int(2) } else { PhasePoly::zero(vt) };
    let binds = [
        ("hbar", cst(vt, Scalar::one())),
        ("nu", cst(vt, nu)),
        ("nu1", var(vt, &mu_name(input.nu1))),
        ("nu2", var(vt, &mu_name(input.nu2))),
        ("r", shift.clone()),
        ("s", shift),
        ("H", var(vt, &h_top).scale_int(2)),
        ("y", var(vt, "a").scale(&osc_step.recip())),
    ];
    let prefactor = subs(&poly(vt, pref_src), &binds).constant_term();
    let factors: Vec<PhasePoly> = srcs.iter().map(|s| subs(&poly(vt, s), &binds)).collect();
    let (upper, lower): (Vec<PhasePoly>, Vec<PhasePoly>) =
        factors.into_iter().partition(|f| involves_any(f, &[&h_top]));
    let sigma = match spacing {
        Spacing::Oscillator => osc_step.clone(),
        Spacing::Unit => Scalar::one(),
    };
    let x = var(vt, "x");
    let bad = |e: String| AlgebraError::Inconsistent(e);

    let mut bottoms: Vec<PhasePoly> = Vec::new();
    for f in &lower {
        let (c, rest) = affine(f, "a").map_err(bad)?;
        let b = rest.scale(&-c.recip());
        if !bottoms.contains(&b) {
            bottoms.push(b);
        }
    }
    let mut branches = Vec::new();
    for bottom in &bottoms {
        let a_x = bottom.add_poly(&x.scale(&sigma));
        let low_x: Vec<PhasePoly> = lower.iter().map(|f| subs(f, &[("a", a_x.clone())])).collect();
        let up_x: Vec<PhasePoly> = upper.iter().map(|f| subs(f, &[("a", a_x.clone())])).collect();
        let mut tops: Vec<PhasePoly> = Vec::new();
        for g in &up_x {
            let at = subs(g, &[("x", var(vt, "N").add_poly(&cst(vt, Scalar::one())))]);
            let (c, rest) = affine(&at, &h_top).map_err(bad)?;
            let t = rest.scale(&-c.recip());
            if !tops.contains(&t) {
                tops.push(t);
            }
        }
        for top in tops {
            let mut fs = low_x.clone();
            fs.extend(up_x.iter().map(|g| subs(g, &[(h_top.as_str(), top.clone())])));
            let mut br = Branch {
                bottom: bottom.clone(),
                root: bottom.scale(&osc_step.recip()),
                top,
                factors: fs,
                bounds: Vec::new(),
                conditions: Vec::new(),
                offset: None,
                rejected: None,
            };
            if br.factors.iter().any(|f| involves_any(f, &[&h_low])) {
                br.rejected = Some("Φ keeps the eigenvalue below A".into());
            } else {
                match positivity(&prefactor, &br.factors) {
                    Ok((b, c)) => {
                        br.bounds = b;
                        br.conditions = c;
                    }
                    Err(e) => br.rejected = Some(e),
                }
            }
            branches.push(br);
        }
    }

    // Offsets against the inherited ladder.
    let low_label = if j == 0 { PhasePoly::zero(vt) } else { var(vt, LABELS[j - 1]) };
    let diffs: Vec<PhasePoly> = branches
        .iter()
        .map(|b| match inherited {
            Some(inh) => subs(&b.bottom, &[(h_low.as_str(), inh.lower.clone())]).sub_poly(&low_label),
            None => b.bottom.clone(),
        })
        .collect();
    let a_offset = match inherited {
        Some(inh) => inh.a_offset.clone(),
        None => {
            let firsts: Vec<&PhasePoly> =
                diffs.iter().zip(&branches).filter(|(_, b)| b.accepted()).map(|(d, _)| d).collect();
            let base = (*firsts.first().ok_or_else(|| no_branch(j, &branches))?).clone();
            let mut low = base.clone();
            for d in &firsts {
                let e = d.sub_poly(&low);
                if e.is_constant() && e.constant_term().is_negative() {
                    low = (*d).clone();
                }
            }
            low
        }
    };
    for (br, d) in branches.iter_mut().zip(&diffs) {
        if !br.accepted() {
            continue;
        }
        let e = d.sub_poly(&a_offset);
        if !e.is_constant() {
            br.rejected = Some(format!("lowest A eigenvalue is off the inherited ladder by {e}"));
        } else {
            let b = e.constant_term();
            if !b.is_integer() {
                br.rejected = Some(format!("lowest A eigenvalue is off the inherited ladder by {b}"));
            } else if b.is_negative() {
                br.rejected = Some(format!("lowest A eigenvalue lies {} below the inherited ladder", -b));
            } else {
                br.offset = Some(b);
            }
        }
    }
    let mut order: Vec<usize> = (0..branches.len()).filter(|&i| branches[i].accepted()).collect();
    order.sort_by(|&a, &b| branches[a].offset.cmp(&branches[b].offset));
    let mut kept: Vec<usize> = Vec::new();
    for i in order {
        let b = branches[i].offset.clone().expect("accepted");
        if let Some(&k) = kept.iter().find(|&&k| {
            let d = &b - branches[k].offset.as_ref().expect("kept");
            (&d / &sigma).is_integer()
        }) {
            let prev = branches[k].offset.clone().expect("kept");
            branches[i].rejected = Some(format!("repeats the branch with offset {prev} on a shorter range"));
        } else {
            kept.push(i);
        }
    }
    if kept.is_empty() {
        return Err(no_branch(j, &branches));
    }

    // New eigenvalue over the labels: N = (L_top − L_lower − b)/σ.
    let top_label = var(vt, LABELS[j + 1]);
    let mut top_offset: Option<PhasePoly> = None;
    for &i in &kept {
        let br = &branches[i];
        let b = cst(vt, br.offset.clone().expect("kept"));
        let n = top_label.sub_poly(&low_label).sub_poly(&b).scale(&sigma.recip());
        let mut pairs = vec![("N", n)];
        if let Some(inh) = inherited {
            pairs.push((h_low.as_str(), inh.lower.clone()));
        }
        let c = subs(&br.top, &pairs).sub_poly(&top_label);
        if involves_any(&c, &LABELS) {
            return Err(bad(format!("new eigenvalue of link {} depends on an inner label: {c}", j + 1)));
        }
        match &top_offset {
            None => top_offset = Some(c),
            Some(t) if *t == c => {}
            Some(t) => {
                return Err(bad(format!("kept branches of link {} disagree on the new eigenvalue: {t} vs {c}", j + 1)))
            }
        }
    }
    Ok(LinkSolution {
        input: input.clone(),
        spacing,
        step: sigma,
        prefactor,
        units,
        branches,
        kept,
        a_offset,
        top_offset: top_offset.expect("kept is non-empty"),
    })
}

fn no_branch(j: usize, branches: &[Branch]) -> AlgebraError {
    let why: Vec<String> = branches
        .iter()
        .map(|b| format!("bottom {}: {}", b.bottom, b.rejected.clone().unwrap_or_default()))
        .collect();
    AlgebraError::NoPositiveBranch(format!("link {}: {}", j + 1, why.join("; ")))
}

/// Closed-form ladder of a chain.
#[derive(Clone, Debug)]
pub struct SpectrumLadder {
    pub chain: ChainLabel,
    pub spacing: Spacing,
    pub table: Arc<VarTable>,
    pub labels: Vec<&'static str>,
    /// `H_i/(ħμ)` over the labels and `μ`.
    pub energies: Vec<PhasePoly>,
    /// Lower bounds on the couplings, strict.
    pub bounds: Vec<Bound>,
    pub conditions: Vec<PhasePoly>,
    pub links: Vec<LinkSolution>,
}

pub fn ladder(chain: ChainLabel, spacing: Spacing) -> Result<SpectrumLadder, AlgebraError> {
    let vt = spectrum_table();
    let mut offsets: Vec<PhasePoly> = Vec::new();
    let mut links = Vec::new();
    for (j, spec) in link_specs(chain).iter().enumerate() {
        let input = LinkInput::from_spec(j, spec)?;
        let inherited = (j > 0).then(|| Inherited {
            lower: var(&vt, LABELS[j - 1]).add_poly(&offsets[j - 1]),
            a_offset: offsets[j].clone(),
        });
        let sol = solve_boundary(&vt, &input, inherited.as_ref(), spacing)?;
        if j == 0 {
            offsets.push(sol.a_offset.clone());
        }
        offsets.push(sol.top_offset.clone());
        links.push(sol);
    }
    let n = chain.dim();
    let energies =
        (0..n).map(|i| var(&vt, LABELS[i]).add_poly(&offsets[i]).scale_int(2)).collect();
    let mut bounds: BTreeMap<usize, Scalar> = BTreeMap::new();
    let mut conditions = Vec::new();
    for l in &links {
        for b in l.kept_branches() {
            for bd in &b.bounds {
                let e = bounds.entry(bd.mu).or_insert_with(|| bd.above.clone());
                if bd.above > *e {
                    *e = bd.above.clone();
                }
            }
            for c in &b.conditions {
                if !conditions.contains(c) {
                    conditions.push(c.clone());
                }
            }
        }
    }
    Ok(SpectrumLadder {
        chain,
        spacing,
        table: vt,
        labels: LABELS[..n].to_vec(),
        energies,
        bounds: bounds.into_iter().map(|(mu, above)| Bound { mu, above }).collect(),
        conditions,
        links,
    })
}

/// Position of a label tuple inside the link representations.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinkStep {
    /// Index into `LinkSolution::branches`.
    pub branch: usize,
    pub x: i64,
    pub top: i64,
}

impl SpectrumLadder {
    pub fn bound(&self, mu: usize) -> Option<&Scalar> {
        self.bounds.iter().find(|b| b.mu == mu).map(|b| &b.above)
    }

    /// Point of the table for labels and couplings (everything else zero).
    fn point(&self, labels: &[i64], mu: &[Scalar]) -> Vec<Scalar> {
        let mut pt = vec![Scalar::zero(); self.table.len()];
        for (i, l) in labels.iter().enumerate() {
            pt[self.table.index(LABELS[i]).expect("label")] = Scalar::from_int(*l);
        }
        for (i, m) in mu.iter().enumerate() {
            pt[self.table.index(&mu_name(i + 1)).expect("coupling")] = m.clone();
        }
        pt
    }

    pub fn check_domain(&self, mu: &[Scalar]) -> Result<(), AlgebraError> {
        if mu.len() != self.labels.len() {
            return Err(AlgebraError::DomainViolation(format!(
                "chain ({}) takes {} couplings, got {}",
                self.chain,
                self.labels.len(),
                mu.len()
            )));
        }
        for b in &self.bounds {
            if mu[b.mu - 1] <= b.above {
                return Err(AlgebraError::DomainViolation(format!("mu{} = {} but mu{} > {} is required", b.mu, mu[b.mu - 1], b.mu, b.above)));
            }
        }
        let pt = self.point(&[], mu);
        for c in &self.conditions {
            if !c.eval(&pt).is_positive() {
                return Err(AlgebraError::DomainViolation(format!("{c} > 0 is required")));
            }
        }
        Ok(())
    }

    /// Representation data of a label tuple, or `None` off the lattice.
    pub fn locate(&self, labels: &[i64]) -> Option<Vec<LinkStep>> {
        if labels.len() != self.labels.len() || labels.first().is_some_and(|&m| m < 0) {
            return None;
        }
        let mut out = Vec::new();
        for (j, link) in self.links.iter().enumerate() {
            let low = if j == 0 { 0 } else { labels[j - 1] };
            let d = labels[j] - low;
            let t = labels[j + 1] - low;
            let s = i64::try_from(link.step.numer()).ok()?;
            let step = link.kept.iter().find_map(|&k| {
                let b = i64::try_from(link.branches[k].offset.as_ref()?.numer()).ok()?;
                (d >= b && (d - b) % s == 0 && t >= d && (t - b) % s == 0)
                    .then(|| LinkStep { branch: k, x: (d - b) / s, top: (t - b) / s })
            })?;
            out.push(step);
        }
        Some(out)
    }

    pub fn energies_at(&self, labels: &[i64], mu: &[Scalar]) -> Vec<Scalar> {
        let pt = self.point(labels, mu);
        self.energies.iter().map(|e| e.eval(&pt)).collect()
    }

    /// All lattice tuples with outermost label `≤ bound`, with exact energies and Φ.
    pub fn enumerate(&self, mu: &[Scalar], bound: u32) -> Result<SpectrumTable, AlgebraError> {
        self.check_domain(mu)?;
        let n = self.labels.len();
        let mut rows = Vec::new();
        let mut tuple = vec![0i64; n];
        self.walk(0, bound as i64, &mut tuple, mu, &mut rows)?;
        let mut deg: BTreeMap<Scalar, usize> = BTreeMap::new();
        for r in &rows {
            *deg.entry(r.energies[n - 1].clone()).or_default() += 1;
        }
        Ok(SpectrumTable {
            chain: self.chain,
            spacing: self.spacing,
            labels: self.labels.clone(),
            mu: mu.to_vec(),
            rows,
            degeneracy: deg.into_iter().collect(),
        })
    }

    fn walk(
        &self,
        i: usize,
        bound: i64,
        t: &mut Vec<i64>,
        mu: &[Scalar],
        rows: &mut Vec<SpectrumRow>,
    ) -> Result<(), AlgebraError> {
        if i == t.len() {
            let Some(steps) = self.locate(t) else { return Ok(()) };
            let mut phi = Vec::new();
            for (link, st) in self.links.iter().zip(&steps) {
                let b = &link.branches[st.branch];
                let mut pt = self.point(&[], mu);
                pt[self.table.index("x").expect("x")] = Scalar::from_int(st.x);
                pt[self.table.index("N").expect("N")] = Scalar::from_int(st.top);
                let v = link.phi(b).eval(&pt);
                if st.x >= 1 && !v.is_positive() {
                    return Err(AlgebraError::Inconsistent(format!(
                        "Φ of link {} is {v} at interior step {} of {:?}",
                        link.input.index + 1,
                        st.x,
                        t
                    )));
                }
                phi.push(v);
            }
            rows.push(SpectrumRow { labels: t.clone(), energies: self.energies_at(t, mu), phi });
            return Ok(());
        }
        let start = if i == 0 { 0 } else { t[i - 1] };
        for v in start..=bound {
            t[i] = v;
            self.walk(i + 1, bound, t, mu, rows)?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SpectrumRow {
    pub labels: Vec<i64>,
    /// `H_i/(ħμ)`.
    pub energies: Vec<Scalar>,
    /// Φ of each link at this tuple's step (units `ħ = μ = 1`).
    pub phi: Vec<Scalar>,
}

#[derive(Clone, Debug)]
pub struct SpectrumTable {
    pub chain: ChainLabel,
    pub spacing: Spacing,
    pub labels: Vec<&'static str>,
    pub mu: Vec<Scalar>,
    pub rows: Vec<SpectrumRow>,
    /// `(H_n/(ħμ), number of rows)`, increasing.
    pub degeneracy: Vec<(Scalar, usize)>,
}

/// One printed item set against the derivation.
#[derive(Clone, Debug)]
pub struct SpectrumFinding {
    pub item: String,
    pub printed: String,
    pub derived: String,
    pub matches: bool,
}

/// Compare a ladder with the published closed forms.
pub fn compare_printed(l: &SpectrumLadder) -> Vec<SpectrumFinding> {
    let vt = &l.table;
    let p = crate::reference::printed_ladder(l.chain);
    let mut out = Vec::new();
    let mut push = |item: String, printed: &str, derived: String, matches: bool| {
        out.push(SpectrumFinding { item, printed: printed.to_string(), derived, matches })
    };
    for (name, src) in p.energies.iter().chain(p.variants) {
        let i: usize = name[1..].parse().expect("H index");
        let e = poly(vt, src);
        let d = &l.energies[i - 1];
        push(format!("{name}/(hbar*mu)"), src, d.to_string(), e == *d);
    }
    for (j, src) in p.a_values {
        let link = &l.links[*j];
        let e = poly(vt, src);
        let derived = var(vt, LABELS[*j]).add_poly(&link.a_offset);
        push(format!("h{} on link {}", j + 1, j + 1), src, derived.to_string(), e == derived);
        // lowest value: A label equal to the label below
        let low = if *j == 0 { PhasePoly::zero(vt) } else { var(vt, LABELS[j - 1]) };
        let at = subs(&e, &[(LABELS[*j], low)]);
        let bottom = link.bottom_in_labels(link.selected());
        let matching = link.kept_branches().any(|b| link.bottom_in_labels(b) == at);
        push(format!("lowest h{} on link {}", j + 1, j + 1), &at.to_string(), bottom.to_string(), matching);
    }
    for (j, src) in p.tops {
        let link = &l.links[*j];
        let e = poly(vt, src);
        let derived = var(vt, LABELS[j + 1]).add_poly(&link.top_offset);
        push(format!("h{} from link {}", j + 2, j + 1), src, derived.to_string(), e == derived);
    }
    for (j, src) in p.phis {
        let link = &l.links[*j];
        let e = poly(vt, src);
        let derived = link.phi_in_labels(link.selected());
        let matching = link.kept_branches().any(|b| link.phi_in_labels(b) == e);
        push(format!("Phi of link {} / {}", j + 1, link.units), src, derived.to_string(), matching);
    }
    for (mu, src) in p.bounds.iter().chain(p.bound_variants) {
        let e: Scalar = src.parse().expect("printed bound");
        let d = l.bound(*mu).cloned();
        let shown = d.as_ref().map(|s| s.to_string()).unwrap_or_else(|| "none".into());
        push(format!("mu{mu} >"), src, shown, d.as_ref() == Some(&e));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ladd(c: ChainLabel) -> SpectrumLadder {
        ladder(c, Spacing::Oscillator).unwrap()
    }

    fn p(l: &SpectrumLadder, s: &str) -> PhasePoly {
        poly(&l.table, s)
    }

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::ratio(n, d)
    }

    #[test]
    fn first_quadratic_link() {
        let l = ladd(ChainLabel::C112);
        let k = &l.links[0];
        assert_eq!(k.kept.len(), 1);
        assert_eq!(k.selected().root, p(&l, "1/2 + 1/2*mu1"));
        assert_eq!(k.top_offset, p(&l, "1 + 1/2*mu1 + 1/2*mu2"));
        assert_eq!(k.phi_in_labels(k.selected()), p(&l, "16*m*(q + 1 - m)*(m + mu1)*(q + 1 - m + mu2)"));
        // the other root needs mu1 < 1
        assert!(k.rejected_branches().any(|b| b.rejected.as_ref().unwrap().contains("upper bound")));
    }

    #[test]
    fn oscillator_ladders() {
        let cases = [
            (ChainLabel::C112, ["2*m + 1 + mu1", "2*q + 2 + mu1 + mu2", "2*p + 4 + mu1 + mu2 + 2*mu3", ""]),
            (ChainLabel::C122, ["2*m + 1 + mu1", "2*q + 3 + mu1 + 2*mu2", "2*p + 5 + mu1 + 2*mu2 + 2*mu3", ""]),
            (ChainLabel::C124, ["2*m + 1 + mu1", "2*q + 3 + mu1 + 2*mu2", "2*p + 7 + mu1 + 2*mu2 + 4*mu3", ""]),
            (
                ChainLabel::C1248,
                [
                    "2*m + 1 + mu1",
                    "2*q + 3 + mu1 + 2*mu2",
                    "2*p + 7 + mu1 + 2*mu2 + 4*mu3",
                    "2*l + 15 + mu1 + 2*mu2 + 4*mu3 + 8*mu4",
                ],
            ),
        ];
        for (c, hs) in cases {
            let l = ladd(c);
            for (i, h) in hs.iter().take(c.dim()).enumerate() {
                assert_eq!(l.energies[i], p(&l, h), "{c} H{}", i + 1);
            }
            for i in 1..=c.dim() {
                assert_eq!(l.bound(i), Some(&Scalar::from_int(-1)), "{c} mu{i}");
            }
        }
    }

    #[test]
    fn oscillator_branches() {
        let l = ladd(ChainLabel::C124);
        let offs: Vec<Scalar> = l.links[1].kept_branches().map(|b| b.offset.clone().unwrap()).collect();
        assert_eq!(offs, vec![Scalar::zero(), Scalar::from_int(2)]);
        assert_eq!(l.links[1].step, Scalar::from_int(4));
        let k = &l.links[0];
        let bottoms: Vec<PhasePoly> = k.kept_branches().map(|b| b.bottom.clone()).collect();
        assert_eq!(bottoms, vec![p(&l, "1/2 + 1/2*mu1"), p(&l, "3/2 + 1/2*mu1")]);
    }

    #[test]
    fn unit_spacing_branches_and_bounds() {
        let l = ladder(ChainLabel::C122, Spacing::Unit).unwrap();
        assert_eq!(l.links[0].selected().bottom, p(&l, "3/2 + 1/2*mu1"));
        assert_eq!(l.links[0].kept.len(), 1);
        assert_eq!(l.links[0].top_offset, p(&l, "3/2 + 1/2*mu1 + mu2"));
        let l = ladder(ChainLabel::C112, Spacing::Unit).unwrap();
        assert_eq!(l.bound(3), Some(&q(-1, 2)));
        let l = ladder(ChainLabel::C124, Spacing::Unit).unwrap();
        assert_eq!(l.bound(3), Some(&q(-1, 4)));
        let l = ladder(ChainLabel::C1248, Spacing::Unit).unwrap();
        assert_eq!(l.bound(4), Some(&q(-1, 8)));
    }

    #[test]
    fn boundary_zeros_and_interior_positivity() {
        let vt = spectrum_table();
        for c in ChainLabel::ALL {
            for sp in [Spacing::Oscillator, Spacing::Unit] {
                let l = ladder(c, sp).unwrap();
                for link in &l.links {
                    for b in link.kept_branches() {
                        let phi = link.phi(b);
                        let n1 = var(&vt, "N").add_poly(&cst(&vt, Scalar::one()));
                        assert!(subs(&phi, &[("x", PhasePoly::zero(&vt))]).is_zero());
                        assert!(subs(&phi, &[("x", n1)]).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn ground_value() {
        let l = ladd(ChainLabel::C112);
        let half = q(1, 2);
        let t = l.enumerate(&[half.clone(), half.clone(), half], 0).unwrap();
        assert_eq!(t.rows.len(), 1);
        assert_eq!(t.rows[0].energies[2], Scalar::from_int(6));
    }

    #[test]
    fn degeneracy_matches_separable_count() {
        // (1,1,2): levels 2K + 4 + … are reached by n1 + n2 + 2 n3 = K
        let l = ladd(ChainLabel::C112);
        let z = Scalar::zero();
        let t = l.enumerate(&[z.clone(), z.clone(), z], 6).unwrap();
        for (e, d) in &t.degeneracy {
            let k = i64::try_from(((e - &Scalar::from_int(4)) / Scalar::from_int(2)).numer()).unwrap();
            if k > 6 {
                continue;
            }
            let mut count = 0;
            for n3 in 0..=k / 2 {
                count += k - 2 * n3 + 1;
            }
            assert_eq!(*d as i64, count, "level {e}");
        }
    }

    #[test]
    fn nesting() {
        let a = ladd(ChainLabel::C122);
        let b = ladd(ChainLabel::C124);
        let c = ladd(ChainLabel::C1248);
        assert_eq!(a.energies[..2], b.energies[..2]);
        assert_eq!(b.energies, c.energies[..3]);
    }

    #[test]
    fn domain_violation() {
        let l = ladd(ChainLabel::C112);
        let r = l.enumerate(&[q(-3, 2), Scalar::zero(), Scalar::zero()], 2);
        assert!(matches!(r, Err(AlgebraError::DomainViolation(_))));
    }

    #[test]
    fn boundary_row_has_zero_phi() {
        let l = ladd(ChainLabel::C124);
        let z = Scalar::zero();
        let t = l.enumerate(&[z.clone(), z.clone(), z], 4).unwrap();
        for r in &t.rows {
            if r.labels[1] == r.labels[0] {
                assert!(r.phi[1].is_zero());
            }
        }
    }
}
