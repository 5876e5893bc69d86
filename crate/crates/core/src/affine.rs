//! The automaton of cell-rescaling maps and the numbers obtained from fixed
//! points of its closed walks.

use std::collections::BTreeSet;

use crate::algnum::AlgNum;
use crate::automata::{minimize, Alphabet, Dfa, Letter, StateId, UpWord};
use crate::error::{Error, Result};
use crate::realline::{partition_table, value_of_up, AffineMap, System};

/// Edge `from → to` carrying the rescaling map of the cell `A′_{from,letter}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FlEdge {
    pub from: StateId,
    pub letter: Letter,
    pub to: StateId,
    pub map: AffineMap,
    /// `id_σ` or `f_σ`, suffixed with `@state` when the bare label is used
    /// by several edges.
    pub label: String,
}

/// Copy of the automaton whose edges carry affine maps. Edges are numbered
/// by source state, then letter.
#[derive(Clone, Debug)]
pub struct FlAutomaton {
    pub num_nodes: usize,
    pub initial: StateId,
    pub edges: Vec<FlEdge>,
    out: Vec<Vec<usize>>,
    names: Vec<String>,
}

impl FlAutomaton {
    /// Edge ids leaving `q`, in letter order.
    pub fn out_edges(&self, q: StateId) -> &[usize] {
        &self.out[q]
    }

    pub fn node_name(&self, q: StateId) -> &str {
        &self.names[q]
    }

    pub fn edge_by_label(&self, label: &str) -> Option<usize> {
        self.edges.iter().position(|e| e.label == label)
    }

    /// Alphabet of edge labels, in edge order.
    pub fn edge_alphabet(&self) -> Alphabet {
        Alphabet::new(self.edges.iter().map(|e| e.label.clone())).expect("labels are distinct")
    }

    pub fn render(&self, path: &[usize]) -> String {
        path.iter().map(|&e| self.edges[e].label.as_str()).collect::<Vec<_>>().join(" ")
    }

    /// Labels separated by whitespace.
    pub fn parse_path(&self, text: &str) -> Result<Vec<usize>> {
        text.split_whitespace()
            .map(|t| self.edge_by_label(t).ok_or_else(|| Error::domain(format!("no edge labeled {t}"))))
            .collect()
    }

    /// End node of `path` from `q`, if the edges are consecutive.
    pub fn walk(&self, q: StateId, path: &[usize]) -> Option<StateId> {
        path.iter().try_fold(q, |p, &e| (self.edges[e].from == p).then_some(self.edges[e].to))
    }
}

pub fn build_fl(sys: &System) -> FlAutomaton {
    let d = sys.dfa();
    let rows = partition_table(sys);
    let mut edges = Vec::new();
    let mut out = vec![Vec::new(); d.num_states()];
    for row in &rows {
        for c in &row.cells {
            let kind = if c.map.is_identity() { "id" } else { "f" };
            out[row.state].push(edges.len());
            edges.push(FlEdge {
                from: row.state,
                letter: c.letter,
                to: c.target,
                map: c.map.clone(),
                label: format!("{kind}_{}", d.alphabet().name(c.letter)),
            });
        }
    }
    let bare: Vec<String> = edges.iter().map(|e| e.label.clone()).collect();
    for e in edges.iter_mut() {
        if bare.iter().filter(|l| **l == e.label).count() > 1 {
            e.label = format!("{}@{}", e.label, d.name(e.from));
        }
    }
    FlAutomaton {
        num_nodes: d.num_states(),
        initial: d.initial(),
        edges,
        out,
        names: d.names().to_vec(),
    }
}

/// `f_t ∘ … ∘ f_1` for the path `f_1 … f_t`.
pub fn compose(fl: &FlAutomaton, path: &[usize]) -> Option<AffineMap> {
    let first = path.first()?;
    let f = fl.edges[*first].map.slope.field().clone();
    Some(path.iter().fold(AffineMap::identity(&f), |acc, &e| acc.then(&fl.edges[e].map)))
}

/// The unique fixed point of the composition along a closed walk.
pub fn compose_fixed_point(fl: &FlAutomaton, cycle: &[usize]) -> Result<AlgNum> {
    let start = cycle.first().map(|&e| fl.edges[e].from).ok_or_else(|| Error::domain("empty cycle"))?;
    if fl.walk(start, cycle) != Some(start) {
        return Err(Error::domain(format!("{} is not a closed walk", fl.render(cycle))));
    }
    let g = compose(fl, cycle).expect("nonempty");
    fixed_point(&g)
}

fn fixed_point(g: &AffineMap) -> Result<AlgNum> {
    let one = g.slope.field().one();
    if g.slope == one {
        return Err(Error::NoUniqueFixedPoint);
    }
    g.offset.try_div(&(&one - &g.slope))
}

/// The regular languages of closed walks at `q` and of walks from the
/// initial node to `q`, over the alphabet of edge labels.
pub fn phi_nu_automata(fl: &FlAutomaton, q: StateId) -> Result<(Dfa, Dfa)> {
    let alphabet = fl.edge_alphabet();
    let mut delta = vec![vec![None; fl.edges.len()]; fl.num_nodes];
    for (i, e) in fl.edges.iter().enumerate() {
        delta[e.from][i] = Some(e.to);
    }
    let mut finals = vec![false; fl.num_nodes];
    finals[q] = true;
    let build = |init: StateId| {
        Dfa::new(alphabet.clone(), fl.names.clone(), init, finals.clone(), delta.clone()).map(|d| minimize(&d))
    };
    Ok((build(q)?, build(fl.initial)?))
}

/// A number with an ultimately periodic representation, with the walks that
/// produced it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct UpValue {
    pub value: AlgNum,
    pub word: UpWord,
    pub state: StateId,
    /// Walk from the initial node to `state`.
    pub path: Vec<usize>,
    /// Closed walk at `state`.
    pub cycle: Vec<usize>,
}

/// Walks from `from` of length exactly `len`, in lexicographic edge order,
/// ending at `to` when given.
fn walks(fl: &FlAutomaton, from: StateId, len: usize, to: Option<StateId>) -> Vec<Vec<usize>> {
    let mut layer: Vec<(StateId, Vec<usize>)> = vec![(from, Vec::new())];
    for _ in 0..len {
        layer = layer
            .into_iter()
            .flat_map(|(p, w)| {
                fl.out_edges(p).iter().map(move |&e| {
                    let mut w2 = w.clone();
                    w2.push(e);
                    (fl.edges[e].to, w2)
                })
            })
            .collect();
    }
    layer.into_iter().filter(|(p, _)| to.is_none_or(|t| *p == t)).map(|(_, w)| w).collect()
}

/// For every node `q`, every closed walk at `q` of length at most
/// `cycle_len_max` with a unique fixed point `x`, and every walk from the
/// initial node to `q` of length at most `path_len_max`: the number whose
/// representation reads the walk then repeats the cycle. Ordered by node,
/// cycle (length, then edges), path (length, then edges); the first witness
/// of each value is kept.
pub fn enumerate_up_values(sys: &System, cycle_len_max: usize, path_len_max: usize) -> Result<Vec<UpValue>> {
    let fl = build_fl(sys);
    let th = sys.theta();
    let one = sys.field().one();
    let mut seen: BTreeSet<AlgNum> = BTreeSet::new();
    let mut out = Vec::new();
    let paths_to: Vec<Vec<Vec<usize>>> = (0..fl.num_nodes)
        .map(|q| (0..=path_len_max).flat_map(|n| walks(&fl, fl.initial, n, Some(q))).collect())
        .collect();
    for q in 0..fl.num_nodes {
        for len in 1..=cycle_len_max {
            for cycle in walks(&fl, q, len, Some(q)) {
                let g = compose(&fl, &cycle).expect("nonempty");
                if g.is_identity() {
                    log::debug!("skipping identity cycle {} at {}", fl.render(&cycle), fl.node_name(q));
                    continue;
                }
                let x = match fixed_point(&g) {
                    Ok(x) => x,
                    Err(Error::NoUniqueFixedPoint) => {
                        log::debug!("cycle {} has slope 1", fl.render(&cycle));
                        continue;
                    }
                    Err(e) => return Err(e),
                };
                for path in &paths_to[q] {
                    let y = path
                        .iter()
                        .rev()
                        .try_fold(x.clone(), |acc, &e| fl.edges[e].map.apply_inverse(&acc))?;
                    let value = (&(&(th - &one) * &y) + &one).try_div(th)?;
                    if seen.contains(&value) {
                        continue;
                    }
                    let letters = |w: &[usize]| w.iter().map(|&e| fl.edges[e].letter).collect::<Vec<_>>();
                    let word = UpWord::new(letters(path), letters(&cycle))?;
                    let check = value_of_up(sys, &word)?;
                    if check != value {
                        return Err(Error::Internal(format!(
                            "witness {} evaluates to {check}, expected {value}",
                            word.display(sys.dfa().alphabet())
                        )));
                    }
                    seen.insert(value.clone());
                    out.push(UpValue { value, word, state: q, path: path.clone(), cycle: cycle.clone() });
                }
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::fixtures;
    use crate::poly::{q, qi, Q};
    use crate::realline::{represent, Representation};

    fn ex5() -> System {
        System::new(&fixtures::ex5()).unwrap()
    }

    fn rat(x: &AlgNum) -> Q {
        x.to_rational().unwrap()
    }

    #[test]
    fn ex5_edges() {
        let s = ex5();
        let fl = build_fl(&s);
        let got: Vec<(String, StateId, StateId, Q, Q)> = fl
            .edges
            .iter()
            .map(|e| (e.label.clone(), e.from, e.to, rat(&e.map.slope), rat(&e.map.offset)))
            .collect();
        assert_eq!(
            got,
            vec![
                ("id_a".into(), 0, 1, qi(1), qi(0)),
                ("f_a".into(), 1, 2, qi(4), qi(0)),
                ("f_b".into(), 1, 0, qi(4), qi(-1)),
                ("f_c".into(), 1, 1, qi(2), qi(-1)),
                ("id_c".into(), 2, 1, qi(1), qi(0)),
            ]
        );
        for q in 0..fl.num_nodes {
            let total = fl.out_edges(q).iter().fold(s.field().zero(), |acc, &e| &acc + &fl.edges[e].map.slope.inv().unwrap());
            assert_eq!(total, s.field().one());
        }
        let b = build_fl(&System::new(&fixtures::binary()).unwrap());
        let labels: Vec<&str> = b.edges.iter().map(|e| e.label.as_str()).collect();
        assert_eq!(labels, vec!["id_1", "f_0", "f_1"]);
        assert_eq!((rat(&b.edges[1].map.slope), rat(&b.edges[1].map.offset)), (qi(2), qi(0)));
        assert_eq!((rat(&b.edges[2].map.slope), rat(&b.edges[2].map.offset)), (qi(2), qi(-1)));
    }

    #[test]
    fn fixed_points() {
        let fl = build_fl(&ex5());
        let fp = |t: &str| rat(&compose_fixed_point(&fl, &fl.parse_path(t).unwrap()).unwrap());
        assert_eq!(fp("id_a f_b"), q(1, 3));
        assert_eq!(fp("id_a f_a id_c f_b"), q(1, 15));
        assert_eq!(fp("id_a f_a id_c f_c f_b"), q(5, 31));
        assert_eq!(fp("f_c f_a id_c f_c"), q(3, 5));
        assert!(matches!(compose_fixed_point(&fl, &fl.parse_path("id_a f_a").unwrap()), Err(Error::Domain(_))));
        let b = build_fl(&System::new(&fixtures::binary()).unwrap());
        assert_eq!(rat(&compose_fixed_point(&b, &b.parse_path("f_0").unwrap()).unwrap()), qi(0));
    }

    #[test]
    fn identity_cycle_has_no_unique_fixed_point() {
        // A single identity loop cannot come from a growing language.
        let f = ex5().field().clone();
        let fl = FlAutomaton {
            num_nodes: 1,
            initial: 0,
            edges: vec![FlEdge { from: 0, letter: 0, to: 0, map: AffineMap::identity(&f), label: "id_a".into() }],
            out: vec![vec![0]],
            names: vec!["p".into()],
        };
        assert!(matches!(compose_fixed_point(&fl, &[0]), Err(Error::NoUniqueFixedPoint)));
    }

    fn find(vals: &[UpValue], x: Q) -> Option<&UpValue> {
        vals.iter().find(|v| rat(&v.value) == x)
    }

    #[test]
    fn enumeration_contains_known_values() {
        let s = ex5();
        let a = s.dfa().alphabet();
        let vals = enumerate_up_values(&s, 5, 1).unwrap();
        for (x, w) in [(q(2, 3), "(ab)^w"), (q(8, 15), "(aacb)^w"), (q(18, 31), "(aaccb)^w"), (q(4, 5), "a(cacc)^w")] {
            let v = find(&vals, x.clone()).unwrap_or_else(|| panic!("{x} missing"));
            assert_eq!(value_of_up(&s, &UpWord::parse(a, w).unwrap()).unwrap(), v.value);
        }
        let vals = enumerate_up_values(&s, 4, 3).unwrap();
        let v = find(&vals, q(23, 40)).unwrap();
        assert_eq!(value_of_up(&s, &UpWord::parse(a, "aac(cacc)^w").unwrap()).unwrap(), v.value);
        let mut uniq = vals.iter().map(|v| v.value.clone()).collect::<Vec<_>>();
        uniq.sort();
        uniq.dedup();
        assert_eq!(uniq.len(), vals.len());
    }

    #[test]
    fn binary_endpoints() {
        let s = System::new(&fixtures::binary()).unwrap();
        let vals = enumerate_up_values(&s, 1, 1).unwrap();
        let got: Vec<(Q, String)> = vals.iter().map(|v| (rat(&v.value), v.word.display(s.dfa().alphabet()).to_string())).collect();
        assert_eq!(got, vec![(q(1, 2), "1(0)^w".to_string()), (qi(1), "(1)^w".to_string())]);
    }

    #[test]
    fn agrees_with_engine() {
        let s = ex5();
        for v in enumerate_up_values(&s, 5, 3).unwrap() {
            match represent(&s, &v.value, 5000).unwrap() {
                Representation::Periodic { word, .. } => assert_eq!(value_of_up(&s, &word).unwrap(), v.value),
                other => panic!("{other:?}"),
            }
            let g = compose(&build_fl(&s), &v.cycle).unwrap();
            assert!(g.slope > s.field().one());
        }
    }

    #[test]
    fn phi_and_nu() {
        let fl = build_fl(&ex5());
        let (phi, nu) = phi_nu_automata(&fl, 1).unwrap();
        let w = |d: &Dfa, t: &str| d.alphabet().parse_word(t).unwrap();
        assert!(phi.accepts(&w(&phi, "f_c")));
        assert!(phi.accepts(&w(&phi, "f_a id_c")));
        assert!(!phi.accepts(&w(&phi, "f_a")));
        assert!(nu.accepts(&w(&nu, "id_a")));
        assert!(nu.accepts(&w(&nu, "id_a f_a id_c")));
        let ab = [w(&phi, "f_c"), w(&phi, "f_a id_c")].concat();
        assert!(phi.accepts(&ab));
    }
}
