//! Relation verification, nilpotency checks and highest-weight structure.

use std::fmt;

use evalrep_cyclotomic::Backend;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::linalg::{joint_kernel, joint_kernel_within, span_closure, SubmoduleBasis};
use crate::{CartanData, CoreError, Generator, ModuleVector, Op, Representation, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Level {
    Finite,
    Affine,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// A basis vector on which the two sides differ.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    pub basis: Vec<u32>,
    pub lhs: String,
    pub rhs: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RelationResult {
    pub id: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

impl RelationResult {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

/// An operator identity `lhs = rhs`.
#[derive(Debug, Clone)]
pub struct Relation<S> {
    pub id: String,
    pub lhs: Op<S>,
    pub rhs: Op<S>,
}

fn zero<S>() -> Op<S> {
    Op::Sum(Vec::new())
}

impl<S> fmt::Display for Relation<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.id)
    }
}

/// Every defining relation among generators with indices in `nodes`, using
/// Cartan entries `cartan(i, j)`.
fn relations_on<B: Backend>(
    b: &B,
    nodes: &[usize],
    cartan: impl Fn(usize, usize) -> i64,
) -> Vec<Relation<B::Scalar>> {
    use Generator::*;
    let g = Op::gen;
    let mut out = Vec::new();
    let eps = b.eps_pow_int(1);
    let diff = b.sub(&eps, &b.eps_pow_int(-1));
    let q2 = b.add(&eps, &b.eps_pow_int(-1));
    for &i in nodes {
        out.push(Relation {
            id: format!("K_{i} K_{i}^-1 = 1"),
            lhs: Op::product(vec![g(K(i)), g(KInv(i))]),
            rhs: Op::Identity,
        });
        out.push(Relation {
            id: format!("K_{i}^-1 K_{i} = 1"),
            lhs: Op::product(vec![g(KInv(i)), g(K(i))]),
            rhs: Op::Identity,
        });
        for &j in nodes {
            let a = cartan(i, j);
            if i < j {
                out.push(Relation {
                    id: format!("K_{i} K_{j} = K_{j} K_{i}"),
                    lhs: Op::product(vec![g(K(i)), g(K(j))]),
                    rhs: Op::product(vec![g(K(j)), g(K(i))]),
                });
            }
            out.push(Relation {
                id: format!("K_{i} E_{j} K_{i}^-1 = eps^{a} E_{j}"),
                lhs: Op::product(vec![g(K(i)), g(E(j)), g(KInv(i))]),
                rhs: Op::scaled(b.eps_pow_int(a), g(E(j))),
            });
            out.push(Relation {
                id: format!("K_{i} F_{j} K_{i}^-1 = eps^{} F_{j}", -a),
                lhs: Op::product(vec![g(K(i)), g(F(j)), g(KInv(i))]),
                rhs: Op::scaled(b.eps_pow_int(-a), g(F(j))),
            });
            let comm = Op::scaled(diff.clone(), Op::commutator(b, g(E(i)), g(F(j))));
            out.push(Relation {
                id: format!("(eps - eps^-1)[E_{i}, F_{j}] = {}", if i == j { format!("K_{i} - K_{i}^-1") } else { "0".into() }),
                lhs: comm,
                rhs: if i == j {
                    Op::difference(b, g(K(i)), g(KInv(i)))
                } else {
                    zero()
                },
            });
            if i == j {
                continue;
            }
            for (x, name) in [(E as fn(usize) -> Generator, "E"), (F, "F")] {
                match a {
                    0 if i < j => out.push(Relation {
                        id: format!("{name}_{i} {name}_{j} = {name}_{j} {name}_{i}"),
                        lhs: Op::product(vec![g(x(i)), g(x(j))]),
                        rhs: Op::product(vec![g(x(j)), g(x(i))]),
                    }),
                    -1 => out.push(Relation {
                        id: format!("Serre {name}_{i}^2 {name}_{j}"),
                        lhs: Op::Sum(vec![
                            Op::product(vec![g(x(i)), g(x(i)), g(x(j))]),
                            Op::scaled(b.neg(&q2), Op::product(vec![g(x(i)), g(x(j)), g(x(i))])),
                            Op::product(vec![g(x(j)), g(x(i)), g(x(i))]),
                        ]),
                        rhs: zero(),
                    }),
                    _ => {}
                }
            }
        }
    }
    out
}

/// Defining relations at the given level; the affine level adds node 0 with
/// the affine Cartan matrix.
pub fn relations<B: Backend>(b: &B, n: usize, level: Level) -> Result<Vec<Relation<B::Scalar>>> {
    let c = CartanData::new(n)?;
    Ok(match level {
        Level::Finite => {
            let nodes: Vec<usize> = (1..=n).collect();
            relations_on(b, &nodes, |i, j| c.entry(i, j))
        }
        Level::Affine => {
            c.affine_matrix()?;
            let nodes: Vec<usize> = (0..=n).collect();
            relations_on(b, &nodes, |i, j| c.affine_entry(i, j))
        }
    })
}

/// Compares both sides on every basis vector.
pub fn check_relation<R: Representation>(
    rep: &R,
    rel: &Relation<<R::B as Backend>::Scalar>,
) -> Result<RelationResult> {
    let b = rep.backend();
    let bad = (0..rep.dim())
        .into_par_iter()
        .map(|r| -> Result<Option<(usize, ModuleVector<_>, ModuleVector<_>)>> {
            let v = ModuleVector::basis(b, r);
            let l = rel.lhs.apply(rep, &v)?;
            let rr = rel.rhs.apply(rep, &v)?;
            Ok((!l.approx_eq(b, &rr)).then_some((r, l, rr)))
        })
        .filter_map(|x| x.transpose())
        .find_first(|_| true)
        .transpose()?;
    Ok(match bad {
        None => RelationResult {
            id: rel.id.clone(),
            status: Status::Pass,
            witness: None,
        },
        Some((r, l, rr)) => RelationResult {
            id: rel.id.clone(),
            status: Status::Fail,
            witness: Some(Witness {
                basis: rep.shape().digits(r).0,
                lhs: render(rep, &l),
                rhs: render(rep, &rr),
            }),
        },
    })
}

/// A vector as `c v(m) + ...`.
pub fn render<R: Representation>(rep: &R, v: &ModuleVector<<R::B as Backend>::Scalar>) -> String {
    if v.is_zero() {
        return "0".into();
    }
    v.iter()
        .map(|(r, c)| {
            let m: Vec<String> = rep.shape().digits(r).0.iter().map(|d| d.to_string()).collect();
            format!("({c}) v({})", m.join(","))
        })
        .collect::<Vec<_>>()
        .join(" + ")
}

pub fn verify_relations<R: Representation>(rep: &R, level: Level) -> Result<Vec<RelationResult>> {
    if level == Level::Affine && !rep.is_affine() {
        return Err(CoreError::MissingGenerator("E_0".into()));
    }
    relations(rep.backend(), rep.rank(), level)?
        .iter()
        .map(|rel| check_relation(rep, rel))
        .collect()
}

/// `E_i^l = F_i^l = 0` and `K_i^l = 1` for `i = 1..n`.
pub fn check_nilpotent_type1<R: Representation>(rep: &R) -> Result<Vec<RelationResult>> {
    let l = rep.shape().order() as usize;
    let mut rels = Vec::new();
    for i in 1..=rep.rank() {
        for (x, name) in [(Generator::E(i), "E"), (Generator::F(i), "F")] {
            rels.push(Relation {
                id: format!("{name}_{i}^{l} = 0"),
                lhs: Op::pow(Op::gen(x), l),
                rhs: zero(),
            });
        }
        rels.push(Relation {
            id: format!("K_{i}^{l} = 1"),
            lhs: Op::pow(Op::gen(Generator::K(i)), l),
            rhs: Op::Identity,
        });
    }
    rels.iter().map(|r| check_relation(rep, r)).collect()
}

/// The finite generators as operators.
pub fn finite_ops<S: Clone + Send + Sync>(n: usize) -> Vec<Op<S>> {
    Generator::all(n, false).into_iter().map(Op::gen).collect()
}

/// Joint kernel of the raising operators `E_1, ..., E_n`, plus `E_0` when
/// asked on an affine module, optionally inside an invariant subspace.
pub fn primitive_vectors<R: Representation>(
    rep: &R,
    with_e0: bool,
    within: Option<&SubmoduleBasis<<R::B as Backend>::Scalar>>,
) -> Result<SubmoduleBasis<<R::B as Backend>::Scalar>> {
    let lo = if with_e0 && rep.is_affine() { 0 } else { 1 };
    let ops: Vec<_> = (lo..=rep.rank()).map(|i| Op::gen(Generator::E(i))).collect();
    match within {
        None => joint_kernel(rep, &ops),
        Some(sub) => joint_kernel_within(rep, &ops, sub),
    }
}

/// Joint kernel of `F_1, ..., F_n`.
pub fn lowering_kernel<R: Representation>(rep: &R) -> Result<SubmoduleBasis<<R::B as Backend>::Scalar>> {
    let ops: Vec<_> = (1..=rep.rank()).map(|i| Op::gen(Generator::F(i))).collect();
    joint_kernel(rep, &ops)
}

/// `L^nil(lambda)`: the span of `v(0)` under the finite generators.
pub fn nilpotent_submodule<R: Representation>(rep: &R) -> Result<SubmoduleBasis<<R::B as Backend>::Scalar>> {
    let b = rep.backend();
    span_closure(rep, &[ModuleVector::basis(b, 0)], &finite_ops(rep.rank()))
}
