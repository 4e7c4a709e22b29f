//! Inönü-Wigner style contractions: rescale generators by powers of `e`,
//! take `e -> 0`, and compare the result with a target presentation.

use std::collections::BTreeMap;

use rayon::prelude::*;

use crate::algebra::Algebra;
use crate::element::{AlgebraElement, Element, Letter, TensorElement, Word};
use crate::error::{Error, Result};
use crate::expr::{evaluate, parse};
use crate::presentation::{Presentation, ScalingSpec};
use crate::report::{Check, Report};
use crate::scalar::{HSubstitution, Rational, Ring, Scalar, DEFAULT_EPS_BOUND};

/// A resolved scaling map between two compiled presentations.
#[derive(Debug)]
pub struct ScalingMap {
    pub name: String,
    /// Source presentation including any adjoined extension generators.
    source: Algebra,
    target: Algebra,
    /// Target generator -> linear combination of source generators.
    forward: Vec<AlgebraElement>,
    /// Source generator -> linear combination of target generators.
    inverse: Vec<AlgebraElement>,
    renorm: Vec<(String, i32)>,
}

/// A contracted commutation relation `[left, right] = rhs` over the target.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ContractedRelation {
    pub label: String,
    pub left: Letter,
    pub right: Letter,
    pub rhs: AlgebraElement,
}

/// Contracted structure maps, indexed by target generator.
#[derive(Clone, Debug)]
pub struct ContractedHopf {
    pub coproduct: Vec<TensorElement>,
    pub counit: Vec<Scalar>,
    pub antipode: Vec<AlgebraElement>,
}

/// The source presentation with the extension generators adjoined as
/// central generators; missing Hopf data defaults to primitive.
pub fn extend_source(source: &Presentation, spec: &ScalingSpec) -> Result<Presentation> {
    if spec.extensions.is_empty() {
        return Ok(source.clone());
    }
    let mut p = source.clone();
    p.name = format!(
        "{}+{}",
        source.name,
        spec.extensions
            .iter()
            .map(|x| x.name.as_str())
            .collect::<Vec<_>>()
            .join("+")
    );
    for x in &spec.extensions {
        if p.index_of(&x.name).is_some() {
            return Err(Error::MalformedScaling(format!(
                "extension generator {} already exists in {}",
                x.name, source.name
            )));
        }
        p.generators.push(x.name.clone());
        p.central.push(x.name.clone());
    }
    let symbols = p.symbols();
    let default = |text: String| parse(&text, &symbols);
    if let Some(h) = &mut p.hopf {
        for x in &spec.extensions {
            let g = &x.name;
            let coproduct = match &x.coproduct {
                Some(e) => e.clone(),
                None => default(format!("{g}@1 + 1@{g}"))?,
            };
            let counit = match &x.counit {
                Some(e) => e.clone(),
                None => default("0".into())?,
            };
            let antipode = match &x.antipode {
                Some(e) => e.clone(),
                None => default(format!("-{g}"))?,
            };
            h.coproduct.insert(g.clone(), coproduct);
            h.counit.insert(g.clone(), counit);
            h.antipode.insert(g.clone(), antipode);
        }
    }
    p.annotations.clear();
    p.scalings.clear();
    p.validate()?;
    Ok(p)
}

fn is_unit_monomial(s: &Scalar) -> Option<(i32, Rational)> {
    let mut terms = s.terms();
    let (m, c) = terms.next()?;
    if terms.next().is_some() || m.h != 0 {
        return None;
    }
    Some((m.eps, c.clone()))
}

/// Inverts a square matrix of `e`-Laurent scalars by Gauss-Jordan
/// elimination; every pivot must be a single `c * e^k` term.
fn invert(matrix: &[Vec<Scalar>], ring: Ring) -> Result<Vec<Vec<Scalar>>> {
    let n = matrix.len();
    let mut a: Vec<Vec<Scalar>> = matrix.to_vec();
    let mut inv: Vec<Vec<Scalar>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        Scalar::one(ring)
                    } else {
                        Scalar::zero(ring)
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .find(|&r| is_unit_monomial(&a[r][col]).is_some())
            .ok_or_else(|| {
                Error::MalformedScaling("assignment is not invertible by monomial pivots".into())
            })?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let (k, c) = is_unit_monomial(&a[col][col]).expect("pivot is a monomial");
        let p_inv = Scalar::monomial(ring, c.recip(), 0, -k)?;
        for j in 0..n {
            a[col][j] = a[col][j].try_mul(&p_inv)?;
            inv[col][j] = inv[col][j].try_mul(&p_inv)?;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                a[r][j] = a[r][j].try_sub(&f.try_mul(&a[col][j])?)?;
                inv[r][j] = inv[r][j].try_sub(&f.try_mul(&inv[col][j])?)?;
            }
        }
    }
    Ok(inv)
}

impl ScalingMap {
    /// Resolves `spec` against explicit source and target presentations.
    /// The source is compiled with `ring`'s `e` bound, or the default bound
    /// when `ring` has none; the target is compiled without `e`.
    pub fn resolve(
        spec: &ScalingSpec,
        source: &Presentation,
        target: &Presentation,
        ring: Ring,
    ) -> Result<Self> {
        let bound = if ring.eps_bound == 0 {
            DEFAULT_EPS_BOUND
        } else {
            ring.eps_bound
        };
        let plain = ring.with_eps(0);
        let ring = ring.with_eps(bound);
        let extended = extend_source(source, spec)?;
        let source_alg = Algebra::new(&extended, ring)?;
        let target_alg = Algebra::new(target, plain)?;
        let s_names = source_alg.names().to_vec();
        let t_names = target_alg.names().to_vec();
        if s_names.len() != t_names.len() {
            return Err(Error::MalformedScaling(format!(
                "{} source generators but {} target generators",
                s_names.len(),
                t_names.len()
            )));
        }
        let mut assigned: BTreeMap<usize, AlgebraElement> = BTreeMap::new();
        for (t, e) in &spec.assignments {
            let ti = target.index_of(t).ok_or_else(|| {
                Error::MalformedScaling(format!("{t} is not a generator of {}", target.name))
            })?;
            let x = evaluate(e, &s_names, ring)?.into_algebra()?;
            if x.terms().any(|(w, _)| w.len() != 1) {
                return Err(Error::MalformedScaling(format!(
                    "image of {t} is not linear in the source generators"
                )));
            }
            if assigned.insert(ti, x).is_some() {
                return Err(Error::MalformedScaling(format!("{t} is assigned twice")));
            }
        }
        let forward: Vec<AlgebraElement> = (0..t_names.len())
            .map(|i| {
                assigned.remove(&i).ok_or_else(|| {
                    Error::MalformedScaling(format!("no assignment for {}", t_names[i]))
                })
            })
            .collect::<Result<_>>()?;
        let n = s_names.len();
        let matrix: Vec<Vec<Scalar>> = forward
            .iter()
            .map(|x| {
                (0..n)
                    .map(|s| x.coefficient(&Word::letter(s as Letter)))
                    .collect()
            })
            .collect();
        let inv = invert(&matrix, ring)?;
        let inverse = (0..n)
            .map(|s| {
                let mut x = AlgebraElement::zero(ring);
                for (t, c) in inv[s].iter().enumerate() {
                    if !c.is_zero() {
                        x.add_term(Word::letter(t as Letter), c.clone())?;
                    }
                }
                Ok(x)
            })
            .collect::<Result<_>>()?;
        Ok(ScalingMap {
            name: spec.name.clone(),
            source: source_alg,
            target: target_alg,
            forward,
            inverse,
            renorm: spec.renorm.clone(),
        })
    }

    /// A built-in scaling map between built-in presentations.
    pub fn builtin(name: &str, source: Option<&str>, ring: Ring) -> Result<Self> {
        let spec = crate::builtin::builtin_scaling(name, source)?;
        Self::resolve(
            &spec,
            &crate::builtin::builtin(&spec.source)?,
            &crate::builtin::builtin(&spec.target)?,
            ring,
        )
    }

    pub fn source(&self) -> &Algebra {
        &self.source
    }

    pub fn target(&self) -> &Algebra {
        &self.target
    }

    fn ring(&self) -> Ring {
        self.source.ring()
    }

    /// Rewrites a source element in target generators, still over `e`.
    fn to_target(&self, x: &AlgebraElement) -> Result<AlgebraElement> {
        x.substitute(|g| Ok(self.inverse[g as usize].clone()))
    }

    fn tensor_to_target(&self, t: &TensorElement) -> Result<TensorElement> {
        t.map_slots(|_, w| self.to_target(&AlgebraElement::from_word(self.ring(), w.clone())))
    }

    fn limit(&self, x: &AlgebraElement, context: &str) -> Result<AlgebraElement> {
        x.limit_epsilon()
            .map_err(|e| singular(e, context))?
            .recast(self.target.ring())
    }

    fn limit_tensor(&self, t: &TensorElement, context: &str) -> Result<TensorElement> {
        t.limit_epsilon()
            .map_err(|e| singular(e, context))?
            .recast(self.target.ring())
    }

    /// Commutator of two target generators computed through the source,
    /// in the `e -> 0` limit.
    fn contract_pair(&self, i: usize, j: usize) -> Result<AlgebraElement> {
        let names = self.target.names();
        let label = format!("[{},{}]", names[i], names[j]);
        let c = self.source.commutator(&self.forward[i], &self.forward[j])?;
        self.limit(&self.to_target(&c)?, &format!("relation {label}"))
    }

    /// Contracted commutation relations for every pair of target generators.
    pub fn contract_relations(&self) -> Result<Vec<ContractedRelation>> {
        let n = self.target.names().len();
        let pairs: Vec<(usize, usize)> = (0..n).flat_map(|i| (0..i).map(move |j| (i, j))).collect();
        let names = self.target.names();
        pairs
            .par_iter()
            .map(|&(i, j)| {
                Ok(ContractedRelation {
                    label: format!("[{},{}]", names[i], names[j]),
                    left: i as Letter,
                    right: j as Letter,
                    rhs: self.contract_pair(i, j)?,
                })
            })
            .collect()
    }

    /// Each leading-word identity of the source, rewritten in target
    /// generators and rescaled by its lowest `e` power before the limit.
    pub fn contract_extras(&self) -> Result<Vec<(String, AlgebraElement)>> {
        let mut out = Vec::new();
        for x in self.source.extras() {
            let y = self.to_target(&x.residue()?)?;
            let lowest = y
                .terms()
                .filter_map(|(_, c)| c.min_eps())
                .min()
                .unwrap_or(0);
            let scaled = y.map_coefficients(|c| c.shift_eps(-lowest))?;
            out.push((x.label.clone(), self.limit(&scaled, &x.label)?));
        }
        Ok(out)
    }

    /// Contracted coproduct, counit and antipode of every target generator.
    pub fn contract_hopf(&self) -> Result<ContractedHopf> {
        let names = self.target.names();
        let per_gen: Vec<(TensorElement, Scalar, AlgebraElement)> = (0..names.len())
            .into_par_iter()
            .map(|i| {
                let x = &self.forward[i];
                let g = &names[i];
                let d = self.tensor_to_target(&self.source.coproduct(x)?)?;
                let e = self.source.counit(x)?;
                let s = self.to_target(&self.source.antipode(x)?)?;
                Ok((
                    self.limit_tensor(&d, &format!("coproduct {g}"))?,
                    e.limit_epsilon()
                        .map_err(|err| singular(err, &format!("counit {g}")))?
                        .recast(self.target.ring())?,
                    self.limit(&s, &format!("antipode {g}"))?,
                ))
            })
            .collect::<Result<_>>()?;
        let mut out = ContractedHopf {
            coproduct: Vec::new(),
            counit: Vec::new(),
            antipode: Vec::new(),
        };
        for (d, e, s) in per_gen {
            out.coproduct.push(d);
            out.counit.push(e);
            out.antipode.push(s);
        }
        Ok(out)
    }

    /// Renormalization power registered for `name`.
    pub fn renorm_power(&self, name: &str) -> Result<i32> {
        self.renorm
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, k)| *k)
            .ok_or_else(|| {
                Error::MalformedScaling(format!("no renormalization registered for {name}"))
            })
    }

    /// `e^power * x` in target generators, in the `e -> 0` limit and
    /// normal-ordered in the target.
    pub fn contract_element_with_power(
        &self,
        x: &AlgebraElement,
        power: i32,
        name: &str,
    ) -> Result<AlgebraElement> {
        let x = x.recast(self.ring())?;
        let nf = self.source.normal_form(&x)?;
        let scaled = nf.map_coefficients(|c| c.shift_eps(power))?;
        let y = self.limit(&self.to_target(&scaled)?, name)?;
        self.target.normal_form(&y)
    }

    /// Contracts a distinguished element with its registered
    /// renormalization power.
    pub fn contract_element(&self, x: &AlgebraElement, name: &str) -> Result<AlgebraElement> {
        self.contract_element_with_power(x, self.renorm_power(name)?, name)
    }

    /// Contracts relations and Hopf data and compares them with the target.
    pub fn compare(&self) -> Result<Report> {
        let relations = self.contract_relations()?;
        let extras = self.contract_extras()?;
        let hopf = match (self.source.hopf(), self.target.hopf()) {
            (Ok(_), Ok(_)) => Some(self.contract_hopf()?),
            _ => None,
        };
        compare_presentations(self, &relations, &extras, hopf.as_ref())
    }
}

fn singular(e: Error, context: &str) -> Error {
    match e {
        Error::SingularLimit { .. } => Error::SingularLimit {
            context: context.to_string(),
        },
        other => other,
    }
}

/// Normal-form comparison of contracted data with the target presentation.
pub fn compare_presentations(
    map: &ScalingMap,
    relations: &[ContractedRelation],
    extras: &[(String, AlgebraElement)],
    hopf: Option<&ContractedHopf>,
) -> Result<Report> {
    let target = map.target();
    let names = target.names();
    let ring = target.ring();
    let mut report = Report::new(
        "contraction",
        format!(
            "{} -> {} ({})",
            map.source().name(),
            target.name(),
            map.name
        ),
    );
    for r in relations {
        let lr = AlgebraElement::from_word(ring, Word(vec![r.left, r.right]));
        let rl = AlgebraElement::from_word(ring, Word(vec![r.right, r.left]));
        let residue = target.normal_form(&lr.try_sub(&rl)?.try_sub(&r.rhs)?)?;
        report.push(
            Check::from_residue(format!("K1.relation.{}", r.label), &residue, names)
                .with_detail(format!("{} = {}", r.label, target.render(&r.rhs))),
        );
    }
    for (label, x) in extras {
        let residue = target.normal_form(x)?;
        report.push(
            Check::from_residue(format!("K1.extra.{label}"), &residue, names)
                .with_detail(format!("{} = 0", target.render(x))),
        );
    }
    if let Some(hd) = hopf {
        let maps = target.hopf()?;
        for (i, g) in names.iter().enumerate() {
            let expected = target.normal_form_tensor(&maps.coproduct[i])?;
            let got = target.normal_form_tensor(&hd.coproduct[i])?;
            report.push(
                Check::from_residue(format!("K2.coproduct.{g}"), &got.try_sub(&expected)?, names)
                    .with_detail(format!("computed {}", got.render(names))),
            );
            let e = hd.counit[i].try_sub(&maps.counit[i])?;
            report.push(Check::from_residue(format!("K3.counit.{g}"), &e, names));
            let expected = target.normal_form(&maps.antipode[i])?;
            let got = target.normal_form(&hd.antipode[i])?;
            report.push(
                Check::from_residue(format!("K4.antipode.{g}"), &got.try_sub(&expected)?, names)
                    .with_detail(format!("computed {}", got.render(names))),
            );
        }
    }
    for a in &target.presentation().annotations {
        report.annotate(format!("{}: {}", a.target, a.text));
    }
    Ok(report.finish())
}

/// Checks that contracting and then sending `h -> 0` agrees with contracting
/// the classical limits of both presentations.
pub fn check_classical_commutation(spec: &ScalingSpec, ring: Ring) -> Result<Report> {
    let source = crate::builtin::builtin(&spec.source)?;
    let target = crate::builtin::builtin(&spec.target)?;
    let quantum = ScalingMap::resolve(spec, &source, &target, ring)?;
    let classical = ScalingMap::resolve(
        spec,
        &crate::algebra::classical_limit(&source)?,
        &crate::algebra::classical_limit(&target)?,
        ring,
    )?;
    let q = quantum.contract_relations()?;
    let c = classical.contract_relations()?;
    let names = classical.target().names().to_vec();
    let mut report = Report::new(
        "classical-limit",
        format!("{} ({})", spec.source, spec.name),
    );
    for (a, b) in q.iter().zip(&c) {
        let qa = a.rhs.substitute_h(HSubstitution::Zero);
        let diff = classical.target().normal_form(&qa.try_sub(&b.rhs)?)?;
        report.push(Check::from_residue(
            format!("L1.{}", a.label),
            &diff,
            &names,
        ));
    }
    Ok(report.finish())
}
