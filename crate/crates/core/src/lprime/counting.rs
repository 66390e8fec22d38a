//! Solution counts for one-variable conjunctions and the bounded embeds test.

use serde::Serialize;

use super::predicates::{eval_p_c, eval_p_delta, p_delta_targets, DeltaSequence};
use super::CycleType;
use crate::error::{Error, Result};
use crate::graph::{Graph, VertexId};

/// An atom in the free variable `x` with one parameter.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "pred", rename_all = "snake_case")]
pub enum Atom {
    /// `P_δ(x, param)`.
    PDelta { delta: DeltaSequence, param: VertexId },
    /// `P_C(x, param)`.
    PC {
        #[serde(serialize_with = "type_name")]
        ty: CycleType,
        param: VertexId,
    },
}

fn type_name<S: serde::Serializer>(ty: &CycleType, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&ty.name)
}

impl Atom {
    fn holds(&self, g: &Graph, x: VertexId) -> Result<bool> {
        Ok(match self {
            Atom::PDelta { delta, param } => eval_p_delta(g, delta, x, *param)?.is_some(),
            Atom::PC { ty, param } => eval_p_c(g, ty, x, *param)?.is_some(),
        })
    }

    fn candidates(&self, g: &Graph) -> Result<Vec<VertexId>> {
        match self {
            Atom::PDelta { delta, param } => {
                g.check_vertex(*param)?;
                // P_δ is symmetric up to reversing δ
                let rev = DeltaSequence::new(delta.items.iter().rev().cloned().collect());
                Ok(p_delta_targets(g, &rev, *param)?.into_iter().map(|(v, _)| v).collect())
            }
            Atom::PC { param, .. } => {
                g.check_vertex(*param)?;
                let mut out = Vec::new();
                for x in g.vertices() {
                    if self.holds(g, x)? {
                        out.push(x);
                    }
                }
                Ok(out)
            }
        }
    }
}

/// Vertices satisfying every atom, ascending. The empty conjunction holds everywhere.
pub fn solutions(g: &Graph, atoms: &[Atom]) -> Result<Vec<VertexId>> {
    let Some((first, rest)) = atoms.split_first() else {
        return Ok(g.vertices().collect());
    };
    let mut out = Vec::new();
    for x in first.candidates(g)? {
        let mut ok = true;
        for a in rest {
            if !a.holds(g, x)? {
                ok = false;
                break;
            }
        }
        if ok {
            out.push(x);
        }
    }
    Ok(out)
}

pub fn count_solutions(g: &Graph, atoms: &[Atom]) -> Result<usize> {
    Ok(solutions(g, atoms)?.len())
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "reason", rename_all = "snake_case")]
pub enum Refutation {
    /// Corpus instance `index` satisfies the base sequence but not the candidate.
    Counterexample { index: usize },
    /// Both sequences are nonempty and the candidate is shorter.
    LengthLaw { base_len: usize, candidate_len: usize },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "verdict", rename_all = "snake_case")]
pub enum Verdict {
    Refuted(Refutation),
    /// No counterexample in the corpus. Not a proof.
    Consistent,
}

/// Tests "`P_d` implies `P_{d_prime}`" on a finite corpus of pairs.
pub fn embeds_bounded(
    d_prime: &DeltaSequence,
    d: &DeltaSequence,
    corpus: &[(Graph, VertexId, VertexId)],
) -> Result<Verdict> {
    for (index, (g, x, y)) in corpus.iter().enumerate() {
        if eval_p_delta(g, d, *x, *y)?.is_none() {
            return Err(Error::CorpusInstance { index });
        }
        if eval_p_delta(g, d_prime, *x, *y)?.is_none() {
            return Ok(Verdict::Refuted(Refutation::Counterexample { index }));
        }
    }
    if !d.is_empty() && !d_prime.is_empty() && d_prime.len() < d.len() {
        return Ok(Verdict::Refuted(Refutation::LengthLaw {
            base_len: d.len(),
            candidate_len: d_prime.len(),
        }));
    }
    Ok(Verdict::Consistent)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::farey::build_level;
    use crate::lprime::tests::catalog;

    fn lozenge_at(param: VertexId) -> Atom {
        Atom::PC {
            ty: catalog().get("lozenge").unwrap().clone(),
            param,
        }
    }

    #[test]
    fn empty_delta_has_one_solution() {
        let g = build_level(3).unwrap().into_graph();
        let a = Atom::PDelta {
            delta: DeltaSequence::default(),
            param: 5,
        };
        assert_eq!(solutions(&g, &[a]).unwrap(), vec![5]);
        assert_eq!(count_solutions(&g, &[]).unwrap(), 16);
    }

    #[test]
    fn candidate_generation_matches_direct_check() {
        let g = build_level(4).unwrap().into_graph();
        let cat = catalog();
        for names in ["lozenge", "lozenge,strip3", "strip4-f", "strip3,lozenge,lozenge"] {
            let atom = Atom::PDelta {
                delta: cat.delta(names).unwrap(),
                param: 2,
            };
            let direct: Vec<VertexId> = g.vertices().filter(|&x| atom.holds(&g, x).unwrap()).collect();
            assert_eq!(solutions(&g, &[atom]).unwrap(), direct, "{names}");
        }
    }

    #[test]
    fn single_lozenge_count_grows() {
        let counts: Vec<usize> = (2..=6)
            .map(|n| count_solutions(&build_level(n).unwrap().into_graph(), &[lozenge_at(0)]).unwrap())
            .collect();
        assert!(counts.windows(2).all(|w| w[0] < w[1]), "{counts:?}");
    }

    #[test]
    fn two_lozenge_count_stabilises() {
        let counts: Vec<usize> = (3..=7)
            .map(|n| count_solutions(&build_level(n).unwrap().into_graph(), &[lozenge_at(0), lozenge_at(1)]).unwrap())
            .collect();
        assert!(counts.windows(2).skip(1).all(|w| w[0] == w[1]), "{counts:?}");
    }

    #[test]
    fn embeds_examples() {
        let cat = catalog();
        let l = cat.delta("lozenge").unwrap();
        let ll = cat.delta("lozenge,lozenge").unwrap();
        let f1 = build_level(1).unwrap().into_graph();
        let corpus = vec![(f1.clone(), 2, 3)];
        assert_eq!(embeds_bounded(&l, &l, &corpus).unwrap(), Verdict::Consistent);
        assert_eq!(
            embeds_bounded(&ll, &l, &corpus).unwrap(),
            Verdict::Refuted(Refutation::Counterexample { index: 0 })
        );
        assert_eq!(
            embeds_bounded(&l, &ll, &corpus),
            Err(Error::CorpusInstance { index: 0 })
        );
        assert_eq!(
            embeds_bounded(&l, &ll, &[]).unwrap(),
            Verdict::Refuted(Refutation::LengthLaw {
                base_len: 2,
                candidate_len: 1
            })
        );
    }
}
