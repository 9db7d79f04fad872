//! Reduced ordered binary decision diagrams with a shared unique table.
//!
//! One [`ObddManager`] owns one variable order and one node store. All
//! diagrams built in a manager are reduced and structurally shared, so two of
//! them compute the same function exactly when their root ids are equal.
//! Diagrams from different managers cannot be combined; the store only grows
//! (no garbage collection at the scales this crate targets).

use std::collections::{HashMap, HashSet};
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::formula::{Expr, Formula};
use crate::gf2::GF2Vector;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum ObddError {
    #[error("bad variable order: {0}")]
    BadOrder(String),
    #[error("operands belong to different managers / variable orders")]
    OrderMismatch,
    #[error("negation vector length {got} does not match variable count {expected}")]
    LengthMismatch { expected: usize, got: usize },
    #[error("variable x{0} is not part of this manager's order")]
    UnknownVariable(usize),
    #[error("invalid node file: {0}")]
    InvalidFile(String),
}

/// Terminal node ids, shared by the in-memory store and the file format.
pub const FALSE_ID: u32 = 0;
pub const TRUE_ID: u32 = 1;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub(crate) struct Node {
    pub(crate) level: u32,
    pub(crate) lo: u32,
    pub(crate) hi: u32,
}

/// Handle to a diagram inside a specific manager.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct Obdd {
    manager: u64,
    root: u32,
}

impl Obdd {
    pub fn root_id(&self) -> u32 {
        self.root
    }

    pub fn is_false(&self) -> bool {
        self.root == FALSE_ID
    }

    pub fn is_true(&self) -> bool {
        self.root == TRUE_ID
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum BinOp {
    And,
    Or,
    Xor,
    Xnor,
}

impl BinOp {
    fn eval(self, a: bool, b: bool) -> bool {
        match self {
            BinOp::And => a && b,
            BinOp::Or => a || b,
            BinOp::Xor => a != b,
            BinOp::Xnor => a == b,
        }
    }
}

static NEXT_MANAGER_ID: AtomicU64 = AtomicU64::new(1);

pub struct ObddManager {
    id: u64,
    /// `order[level]` is the 1-based variable tested at that level.
    order: Vec<usize>,
    /// `level_of[var - 1]`, inverse of `order`.
    level_of: Vec<u32>,
    nodes: Vec<Node>,
    unique: HashMap<Node, u32>,
}

impl ObddManager {
    /// Creates a manager for the given order, which must be a permutation of
    /// `{1..=n}` for `n = order.len()`.
    pub fn new(order: &[usize]) -> Result<Self, ObddError> {
        let n = order.len();
        if n == 0 {
            return Err(ObddError::BadOrder("order must name at least one variable".into()));
        }
        let mut level_of = vec![u32::MAX; n];
        for (level, &var) in order.iter().enumerate() {
            if var == 0 || var > n {
                return Err(ObddError::BadOrder(format!(
                    "variable x{var} outside 1..={n}"
                )));
            }
            if level_of[var - 1] != u32::MAX {
                return Err(ObddError::BadOrder(format!("variable x{var} listed twice")));
            }
            level_of[var - 1] = level as u32;
        }
        let terminal = Node { level: n as u32, lo: 0, hi: 0 };
        Ok(ObddManager {
            id: NEXT_MANAGER_ID.fetch_add(1, Ordering::Relaxed),
            order: order.to_vec(),
            level_of,
            nodes: vec![terminal, terminal],
            unique: HashMap::new(),
        })
    }

    pub fn order(&self) -> &[usize] {
        &self.order
    }

    pub fn var_count(&self) -> usize {
        self.order.len()
    }

    /// Total number of store entries, terminals included.
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn terminal_level(&self) -> u32 {
        self.order.len() as u32
    }

    #[inline]
    pub(crate) fn node(&self, id: u32) -> Node {
        self.nodes[id as usize]
    }

    fn level_of_var(&self, var: usize) -> Result<u32, ObddError> {
        self.level_of
            .get(var.wrapping_sub(1))
            .copied()
            .filter(|&l| l != u32::MAX)
            .ok_or(ObddError::UnknownVariable(var))
    }

    fn handle(&self, root: u32) -> Obdd {
        Obdd { manager: self.id, root }
    }

    fn check(&self, x: Obdd) -> Result<u32, ObddError> {
        if x.manager != self.id {
            return Err(ObddError::OrderMismatch);
        }
        Ok(x.root)
    }

    /// Reduced node constructor: collapses equal children and dedupes through
    /// the unique table.
    pub(crate) fn mk(&mut self, level: u32, lo: u32, hi: u32) -> u32 {
        if lo == hi {
            return lo;
        }
        debug_assert!(level < self.nodes[lo as usize].level);
        debug_assert!(level < self.nodes[hi as usize].level);
        let node = Node { level, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as u32;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    pub fn constant(&self, value: bool) -> Obdd {
        self.handle(if value { TRUE_ID } else { FALSE_ID })
    }

    pub fn var(&mut self, var: usize) -> Result<Obdd, ObddError> {
        let level = self.level_of_var(var)?;
        let id = self.mk(level, FALSE_ID, TRUE_ID);
        Ok(self.handle(id))
    }

    /// Builds the diagram of a formula. The manager's order must cover
    /// exactly the formula's declared variables.
    pub fn build(&mut self, f: &Formula) -> Result<Obdd, ObddError> {
        if f.var_count() != self.order.len() {
            return Err(ObddError::BadOrder(format!(
                "order covers {} variables but the formula declares {}",
                self.order.len(),
                f.var_count()
            )));
        }
        fn go(mgr: &mut ObddManager, e: &Expr) -> Result<u32, ObddError> {
            Ok(match e {
                Expr::Var(i) => {
                    let level = mgr.level_of_var(*i)?;
                    mgr.mk(level, FALSE_ID, TRUE_ID)
                }
                Expr::Not(x) => {
                    let inner = go(mgr, x)?;
                    mgr.apply_ids(BinOp::Xor, inner, TRUE_ID)
                }
                Expr::And(x, y) => {
                    let (a, b) = (go(mgr, x)?, go(mgr, y)?);
                    mgr.apply_ids(BinOp::And, a, b)
                }
                Expr::Or(x, y) => {
                    let (a, b) = (go(mgr, x)?, go(mgr, y)?);
                    mgr.apply_ids(BinOp::Or, a, b)
                }
            })
        }
        let root = go(self, f.root())?;
        Ok(self.handle(root))
    }

    pub fn apply(&mut self, op: BinOp, a: Obdd, b: Obdd) -> Result<Obdd, ObddError> {
        let (a, b) = (self.check(a)?, self.check(b)?);
        let root = self.apply_ids(op, a, b);
        Ok(self.handle(root))
    }

    pub fn not(&mut self, a: Obdd) -> Result<Obdd, ObddError> {
        let a = self.check(a)?;
        let root = self.apply_ids(BinOp::Xor, a, TRUE_ID);
        Ok(self.handle(root))
    }

    fn apply_ids(&mut self, op: BinOp, a: u32, b: u32) -> u32 {
        let mut memo = HashMap::new();
        self.apply_rec(op, a, b, &mut memo)
    }

    fn apply_rec(&mut self, op: BinOp, a: u32, b: u32, memo: &mut HashMap<(u32, u32), u32>) -> u32 {
        if a <= TRUE_ID && b <= TRUE_ID {
            return if op.eval(a == TRUE_ID, b == TRUE_ID) { TRUE_ID } else { FALSE_ID };
        }
        // Cheap absorbing / identity cases before touching the memo table.
        match (op, a, b) {
            (BinOp::And, FALSE_ID, _) | (BinOp::And, _, FALSE_ID) => return FALSE_ID,
            (BinOp::And, TRUE_ID, x) | (BinOp::And, x, TRUE_ID) => return x,
            (BinOp::Or, TRUE_ID, _) | (BinOp::Or, _, TRUE_ID) => return TRUE_ID,
            (BinOp::Or, FALSE_ID, x) | (BinOp::Or, x, FALSE_ID) => return x,
            (BinOp::Xor, FALSE_ID, x) | (BinOp::Xor, x, FALSE_ID) => return x,
            _ => {}
        }
        if a == b {
            return match op {
                BinOp::And | BinOp::Or => a,
                BinOp::Xor => FALSE_ID,
                BinOp::Xnor => TRUE_ID,
            };
        }
        if let Some(&r) = memo.get(&(a, b)) {
            return r;
        }
        let (na, nb) = (self.nodes[a as usize], self.nodes[b as usize]);
        let level = na.level.min(nb.level);
        let (a0, a1) = if na.level == level { (na.lo, na.hi) } else { (a, a) };
        let (b0, b1) = if nb.level == level { (nb.lo, nb.hi) } else { (b, b) };
        let lo = self.apply_rec(op, a0, b0, memo);
        let hi = self.apply_rec(op, a1, b1, memo);
        let r = self.mk(level, lo, hi);
        memo.insert((a, b), r);
        r
    }

    /// Translates the function by `v`: the result evaluates to `g(v ⊕ u)` on
    /// every assignment `u`. Implemented by swapping the children of every
    /// node whose variable is flipped, re-reducing as nodes are rebuilt.
    pub fn negate_inputs(&mut self, g: Obdd, v: &GF2Vector) -> Result<Obdd, ObddError> {
        let g = self.check(g)?;
        if v.len() != self.order.len() {
            return Err(ObddError::LengthMismatch { expected: self.order.len(), got: v.len() });
        }
        let mut memo = HashMap::new();
        let root = self.negate_rec(g, v, &mut memo);
        Ok(self.handle(root))
    }

    fn negate_rec(&mut self, id: u32, v: &GF2Vector, memo: &mut HashMap<u32, u32>) -> u32 {
        if id <= TRUE_ID {
            return id;
        }
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let node = self.nodes[id as usize];
        let var = self.order[node.level as usize];
        let lo = self.negate_rec(node.lo, v, memo);
        let hi = self.negate_rec(node.hi, v, memo);
        let r = if v.get(var - 1) {
            self.mk(node.level, hi, lo)
        } else {
            self.mk(node.level, lo, hi)
        };
        memo.insert(id, r);
        r
    }

    /// Same function iff same root: canonicity of the shared store.
    pub fn equivalent(&self, a: Obdd, b: Obdd) -> Result<bool, ObddError> {
        Ok(self.check(a)? == self.check(b)?)
    }

    /// Number of satisfying assignments over `n >= var_count()` variables.
    pub fn count_models(&self, a: Obdd, n: usize) -> Result<u64, ObddError> {
        let root = self.check(a)?;
        assert!(
            n >= self.order.len(),
            "count_models needs at least the manager's {} variables",
            self.order.len()
        );
        let mut memo: HashMap<u32, u64> = HashMap::new();
        let below = self.count_rec(root, &mut memo);
        let free_above = self.nodes[root as usize].level as u64;
        let extra = (n - self.order.len()) as u64;
        Ok(below << (free_above + extra))
    }

    /// Satisfying assignments of the variables at `level(id)..terminal`.
    fn count_rec(&self, id: u32, memo: &mut HashMap<u32, u64>) -> u64 {
        if id == FALSE_ID {
            return 0;
        }
        if id == TRUE_ID {
            return 1;
        }
        if let Some(&c) = memo.get(&id) {
            return c;
        }
        let node = self.nodes[id as usize];
        let lo = self.count_rec(node.lo, memo) << (self.nodes[node.lo as usize].level - node.level - 1);
        let hi = self.count_rec(node.hi, memo) << (self.nodes[node.hi as usize].level - node.level - 1);
        let c = lo + hi;
        memo.insert(id, c);
        c
    }

    /// Cofactor with respect to `var = value`.
    pub fn restrict(&mut self, a: Obdd, var: usize, value: bool) -> Result<Obdd, ObddError> {
        let a = self.check(a)?;
        let level = self.level_of_var(var)?;
        let mut memo = HashMap::new();
        let root = self.restrict_rec(a, level, value, &mut memo);
        Ok(self.handle(root))
    }

    fn restrict_rec(&mut self, id: u32, level: u32, value: bool, memo: &mut HashMap<u32, u32>) -> u32 {
        let node = self.nodes[id as usize];
        if node.level > level || id <= TRUE_ID {
            return id;
        }
        if node.level == level {
            return if value { node.hi } else { node.lo };
        }
        if let Some(&r) = memo.get(&id) {
            return r;
        }
        let lo = self.restrict_rec(node.lo, level, value, memo);
        let hi = self.restrict_rec(node.hi, level, value, memo);
        let r = self.mk(node.level, lo, hi);
        memo.insert(id, r);
        r
    }

    /// Universal quantification: the result is true on an assignment of the
    /// remaining variables iff `a` is true for every completion over `vars`.
    /// Computed as the AND of the two cofactors, variable by variable.
    pub fn forall_quantify(&mut self, a: Obdd, vars: &[usize]) -> Result<Obdd, ObddError> {
        let mut current = self.check(a)?;
        let mut seen = HashSet::new();
        for &var in vars {
            self.level_of_var(var)?;
            if !seen.insert(var) {
                continue;
            }
            let handle = self.handle(current);
            let lo = self.restrict(handle, var, false)?;
            let hi = self.restrict(handle, var, true)?;
            current = self.apply_ids(BinOp::And, lo.root, hi.root);
        }
        Ok(self.handle(current))
    }

    /// Visits every satisfying assignment (over the manager's variables) in
    /// level-lexicographic order, `0` branches first. The callback returns
    /// `false` to stop early.
    pub fn for_each_model<F: FnMut(&GF2Vector) -> bool>(
        &self,
        a: Obdd,
        mut f: F,
    ) -> Result<(), ObddError> {
        let root = self.check(a)?;
        let mut assignment = GF2Vector::zeros(self.order.len());
        self.walk_models(root, 0, &mut assignment, &mut f);
        Ok(())
    }

    fn walk_models<F: FnMut(&GF2Vector) -> bool>(
        &self,
        id: u32,
        level: u32,
        assignment: &mut GF2Vector,
        f: &mut F,
    ) -> bool {
        if id == FALSE_ID {
            return true;
        }
        if level == self.terminal_level() {
            return f(assignment);
        }
        let node = self.nodes[id as usize];
        let var = self.order[level as usize];
        for value in [false, true] {
            let child = if node.level == level {
                if value {
                    node.hi
                } else {
                    node.lo
                }
            } else {
                id // variable skipped: both branches lead here
            };
            assignment.set(var - 1, value);
            if !self.walk_models(child, level + 1, assignment, f) {
                return false;
            }
        }
        assignment.set(self.order[level as usize] - 1, false);
        true
    }

    /// First satisfying assignment in level-lexicographic order, if any.
    pub fn min_model(&self, a: Obdd) -> Result<Option<GF2Vector>, ObddError> {
        let mut out = None;
        self.for_each_model(a, |m| {
            out = Some(m.clone());
            false
        })?;
        Ok(out)
    }

    /// Store scan asserting reducedness: no node with equal children, no two
    /// distinct nodes with the same (level, lo, hi), children strictly deeper.
    pub fn check_reduced(&self) -> Result<(), String> {
        let mut seen = HashSet::new();
        for (id, node) in self.nodes.iter().enumerate().skip(2) {
            if node.lo == node.hi {
                return Err(format!("node {id} has equal children"));
            }
            if !seen.insert(*node) {
                return Err(format!("node {id} duplicates another node's triple"));
            }
            for child in [node.lo, node.hi] {
                if self.nodes[child as usize].level <= node.level {
                    return Err(format!("node {id} has a child at a non-deeper level"));
                }
            }
            if self.unique.get(node) != Some(&(id as u32)) {
                return Err(format!("unique table out of sync at node {id}"));
            }
        }
        Ok(())
    }
}

/// On-disk form: `{n, order, nodes: [{id, var, lo, hi}], root}` with the
/// reserved ids 0 = FALSE and 1 = TRUE.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ObddFile {
    pub n: usize,
    pub order: Vec<usize>,
    pub nodes: Vec<ObddFileNode>,
    pub root: u32,
}

#[derive(Clone, Copy, Debug, Serialize, Deserialize)]
pub struct ObddFileNode {
    pub id: u32,
    pub var: usize,
    pub lo: u32,
    pub hi: u32,
}

impl ObddManager {
    /// Creates a fresh manager holding the file's diagram. The loader rejects
    /// files that are not ordered, not reduced, or not fully reachable.
    pub fn from_file(file: &ObddFile) -> Result<(Self, Obdd), ObddError> {
        if file.order.len() != file.n {
            return Err(ObddError::InvalidFile(format!(
                "order lists {} variables, n = {}",
                file.order.len(),
                file.n
            )));
        }
        let mut mgr = Self::new(&file.order)?;
        let root = mgr.load_file(file)?;
        Ok((mgr, root))
    }

    /// Loads a file into this manager; the file's order must match exactly.
    pub fn load_file(&mut self, file: &ObddFile) -> Result<Obdd, ObddError> {
        if file.order != self.order {
            return Err(ObddError::OrderMismatch);
        }
        let mut map: HashMap<u32, u32> = HashMap::from([(FALSE_ID, FALSE_ID), (TRUE_ID, TRUE_ID)]);
        let mut triples_in_file: HashSet<(u32, u32, u32)> = HashSet::new();
        for fnode in &file.nodes {
            if fnode.id <= TRUE_ID {
                return Err(ObddError::InvalidFile(format!("node id {} is reserved", fnode.id)));
            }
            if map.contains_key(&fnode.id) {
                return Err(ObddError::InvalidFile(format!("node id {} defined twice", fnode.id)));
            }
            let level = self
                .level_of_var(fnode.var)
                .map_err(|_| ObddError::InvalidFile(format!("node {} tests unknown variable x{}", fnode.id, fnode.var)))?;
            if fnode.lo == fnode.hi {
                return Err(ObddError::InvalidFile(format!(
                    "node {} is not reduced (lo == hi)",
                    fnode.id
                )));
            }
            let resolve = |child: u32| -> Result<u32, ObddError> {
                map.get(&child).copied().ok_or_else(|| {
                    ObddError::InvalidFile(format!(
                        "node {} references undefined child {child} (children must precede parents)",
                        fnode.id
                    ))
                })
            };
            let lo = resolve(fnode.lo)?;
            let hi = resolve(fnode.hi)?;
            for child in [lo, hi] {
                if self.nodes[child as usize].level <= level {
                    return Err(ObddError::InvalidFile(format!(
                        "node {} violates the variable order",
                        fnode.id
                    )));
                }
            }
            if !triples_in_file.insert((level, lo, hi)) {
                return Err(ObddError::InvalidFile(format!(
                    "node {} duplicates an earlier node (not reduced)",
                    fnode.id
                )));
            }
            let internal = self.mk(level, lo, hi);
            map.insert(fnode.id, internal);
        }
        let root = *map
            .get(&file.root)
            .ok_or_else(|| ObddError::InvalidFile(format!("root {} is undefined", file.root)))?;

        // Every declared node must be reachable from the root.
        let mut reachable: HashSet<u32> = HashSet::new();
        let mut stack = vec![file.root];
        let by_id: HashMap<u32, &ObddFileNode> = file.nodes.iter().map(|n| (n.id, n)).collect();
        while let Some(id) = stack.pop() {
            if id <= TRUE_ID || !reachable.insert(id) {
                continue;
            }
            let node = by_id[&id];
            stack.push(node.lo);
            stack.push(node.hi);
        }
        if reachable.len() != file.nodes.len() {
            return Err(ObddError::InvalidFile("file contains nodes unreachable from the root".into()));
        }
        Ok(self.handle(root))
    }

    /// Serializes the diagram reachable from `a`, children before parents,
    /// with fresh sequential ids starting at 2.
    pub fn to_file(&self, a: Obdd) -> Result<ObddFile, ObddError> {
        let root = self.check(a)?;
        let mut map: HashMap<u32, u32> = HashMap::from([(FALSE_ID, FALSE_ID), (TRUE_ID, TRUE_ID)]);
        let mut nodes = Vec::new();
        fn emit(
            mgr: &ObddManager,
            id: u32,
            map: &mut HashMap<u32, u32>,
            nodes: &mut Vec<ObddFileNode>,
        ) -> u32 {
            if let Some(&mapped) = map.get(&id) {
                return mapped;
            }
            let node = mgr.nodes[id as usize];
            let lo = emit(mgr, node.lo, map, nodes);
            let hi = emit(mgr, node.hi, map, nodes);
            let fresh = (nodes.len() + 2) as u32;
            nodes.push(ObddFileNode { id: fresh, var: mgr.order[node.level as usize], lo, hi });
            map.insert(id, fresh);
            fresh
        }
        let root = emit(self, root, &mut map, &mut nodes);
        Ok(ObddFile { n: self.order.len(), order: self.order.clone(), nodes, root })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::formula::Formula;

    fn v(s: &str) -> GF2Vector {
        s.parse().unwrap()
    }

    fn identity_manager(n: usize) -> ObddManager {
        let order: Vec<usize> = (1..=n).collect();
        ObddManager::new(&order).unwrap()
    }

    #[test]
    fn new_rejects_non_permutations() {
        assert!(matches!(ObddManager::new(&[1, 1]), Err(ObddError::BadOrder(_))));
        assert!(matches!(ObddManager::new(&[1, 3]), Err(ObddError::BadOrder(_))));
        assert!(matches!(ObddManager::new(&[]), Err(ObddError::BadOrder(_))));
    }

    #[test]
    fn tautology_reduces_to_true_terminal() {
        let mut mgr = identity_manager(1);
        let f = Formula::parse("x1 | !x1", 1).unwrap();
        let d = mgr.build(&f).unwrap();
        assert!(d.is_true());
    }

    #[test]
    fn single_variable_diagram() {
        let mut mgr = identity_manager(1);
        let f = Formula::parse("x1", 1).unwrap();
        let d = mgr.build(&f).unwrap();
        let node = mgr.node(d.root_id());
        assert_eq!((node.lo, node.hi), (FALSE_ID, TRUE_ID));
    }

    #[test]
    fn or_chain_has_three_decision_nodes() {
        let mut mgr = identity_manager(3);
        let f = Formula::parse("x1 | x2 | x3", 3).unwrap();
        let d = mgr.build(&f).unwrap();
        // Count nodes reachable from the root.
        let file = mgr.to_file(d).unwrap();
        assert_eq!(file.nodes.len(), 3);
        assert_eq!(mgr.count_models(d, 3).unwrap(), 7);
    }

    #[test]
    fn apply_xor_and_xnor_with_self() {
        let mut mgr = identity_manager(2);
        let f = Formula::parse("x1 & x2", 2).unwrap();
        let a = mgr.build(&f).unwrap();
        assert!(mgr.apply(BinOp::Xor, a, a).unwrap().is_false());
        assert!(mgr.apply(BinOp::Xnor, a, a).unwrap().is_true());
    }

    #[test]
    fn apply_or_truth_table() {
        let mut mgr = identity_manager(2);
        let a = mgr.var(1).unwrap();
        let b = mgr.var(2).unwrap();
        let d = mgr.apply(BinOp::Or, a, b).unwrap();
        let expected = Formula::parse("x1 | x2", 2).unwrap().truth_table().unwrap();
        for u in 0..4u64 {
            let assignment = GF2Vector::from_index(u, 2);
            let or3 = Formula::parse("x1 | x2", 2).unwrap();
            assert_eq!(expected.get(u as usize), or3.evaluate(&assignment).unwrap());
        }
        assert_eq!(mgr.count_models(d, 2).unwrap(), 3);
    }

    #[test]
    fn apply_rejects_foreign_handles() {
        let mut m1 = identity_manager(2);
        let mut m2 = identity_manager(2);
        let a = m1.var(1).unwrap();
        let b = m2.var(1).unwrap();
        assert_eq!(m1.apply(BinOp::And, a, b).unwrap_err(), ObddError::OrderMismatch);
    }

    #[test]
    fn negate_inputs_zero_vector_is_identity() {
        let mut mgr = identity_manager(3);
        let f = Formula::parse("x1 & (x2 | !x3)", 3).unwrap();
        let d = mgr.build(&f).unwrap();
        let same = mgr.negate_inputs(d, &v("000")).unwrap();
        assert!(mgr.equivalent(d, same).unwrap());
    }

    #[test]
    fn negate_single_variable() {
        let mut mgr = identity_manager(1);
        let x1 = mgr.var(1).unwrap();
        let negated = mgr.negate_inputs(x1, &v("1")).unwrap();
        let not_x1 = mgr.not(x1).unwrap();
        assert!(mgr.equivalent(negated, not_x1).unwrap());
    }

    #[test]
    fn negate_matches_formula_example() {
        let mut mgr = identity_manager(3);
        let g = mgr.build(&Formula::parse("x1 | !x2 | !x3", 3).unwrap()).unwrap();
        let f = mgr.build(&Formula::parse("x1 | x2 | x3", 3).unwrap()).unwrap();
        let gv = mgr.negate_inputs(g, &v("011")).unwrap();
        assert!(mgr.equivalent(gv, f).unwrap());
    }

    #[test]
    fn equivalence_is_order_insensitive_to_commutativity() {
        let mut mgr = identity_manager(2);
        let a = mgr.build(&Formula::parse("x1 | x2", 2).unwrap()).unwrap();
        let b = mgr.build(&Formula::parse("x2 | x1", 2).unwrap()).unwrap();
        let c = mgr.build(&Formula::parse("x1 & x2", 2).unwrap()).unwrap();
        assert!(mgr.equivalent(a, b).unwrap());
        assert!(!mgr.equivalent(a, c).unwrap());
    }

    #[test]
    fn count_models_terminals() {
        let mgr = identity_manager(3);
        assert_eq!(mgr.count_models(mgr.constant(false), 3).unwrap(), 0);
        assert_eq!(mgr.count_models(mgr.constant(true), 3).unwrap(), 8);
    }

    #[test]
    fn forall_quantification() {
        let mut mgr = identity_manager(2);
        let t = mgr.constant(true);
        let q = mgr.forall_quantify(t, &[1]).unwrap();
        assert!(q.is_true());

        let x1 = mgr.var(1).unwrap();
        let q = mgr.forall_quantify(x1, &[1]).unwrap();
        assert!(q.is_false());

        // ∀x2 (x1 ∨ x2) = x1
        let or = mgr.build(&Formula::parse("x1 | x2", 2).unwrap()).unwrap();
        let q = mgr.forall_quantify(or, &[2]).unwrap();
        assert!(mgr.equivalent(q, x1).unwrap());
        assert_eq!(mgr.forall_quantify(or, &[5]).unwrap_err(), ObddError::UnknownVariable(5));
    }

    #[test]
    fn model_walk_is_lexicographic_and_stoppable() {
        let mut mgr = identity_manager(2);
        let or = mgr.build(&Formula::parse("x1 | x2", 2).unwrap()).unwrap();
        let mut models = Vec::new();
        mgr.for_each_model(or, |m| {
            models.push(m.to_string());
            true
        })
        .unwrap();
        assert_eq!(models, ["10", "01", "11"]);
        assert_eq!(mgr.min_model(or).unwrap().unwrap().to_string(), "10");
    }

    #[test]
    fn store_stays_reduced_across_operations() {
        let mut mgr = identity_manager(4);
        let f = Formula::parse("(x1 | x2) & (x3 | !x4)", 4).unwrap();
        let a = mgr.build(&f).unwrap();
        let b = mgr.negate_inputs(a, &v("1010")).unwrap();
        let _ = mgr.apply(BinOp::Xor, a, b).unwrap();
        let _ = mgr.forall_quantify(a, &[2, 3]).unwrap();
        mgr.check_reduced().unwrap();
    }

    #[test]
    fn file_round_trip() {
        let mut mgr = identity_manager(3);
        let f = Formula::parse("x1 & x2 | !x3", 3).unwrap();
        let d = mgr.build(&f).unwrap();
        let file = mgr.to_file(d).unwrap();
        let (mgr2, d2) = ObddManager::from_file(&file).unwrap();
        mgr2.check_reduced().unwrap();
        for u in 0..8usize {
            let t = f.truth_table().unwrap();
            let mut hit = false;
            mgr2.for_each_model(d2, |m| {
                if *m == GF2Vector::from_index(u as u64, 3) {
                    hit = true;
                    false
                } else {
                    true
                }
            })
            .unwrap();
            assert_eq!(hit, t.get(u));
        }
    }

    #[test]
    fn loader_rejects_unreduced_and_unordered_files() {
        let equal_children = ObddFile {
            n: 1,
            order: vec![1],
            nodes: vec![ObddFileNode { id: 2, var: 1, lo: TRUE_ID, hi: TRUE_ID }],
            root: 2,
        };
        assert!(matches!(
            ObddManager::from_file(&equal_children),
            Err(ObddError::InvalidFile(_))
        ));

        let order_violation = ObddFile {
            n: 2,
            order: vec![1, 2],
            nodes: vec![
                ObddFileNode { id: 2, var: 1, lo: FALSE_ID, hi: TRUE_ID },
                ObddFileNode { id: 3, var: 2, lo: 2, hi: TRUE_ID },
            ],
            root: 3,
        };
        assert!(matches!(
            ObddManager::from_file(&order_violation),
            Err(ObddError::InvalidFile(_))
        ));

        let duplicate_triple = ObddFile {
            n: 2,
            order: vec![1, 2],
            nodes: vec![
                ObddFileNode { id: 2, var: 2, lo: FALSE_ID, hi: TRUE_ID },
                ObddFileNode { id: 3, var: 2, lo: FALSE_ID, hi: TRUE_ID },
                ObddFileNode { id: 4, var: 1, lo: 2, hi: 3 },
            ],
            root: 4,
        };
        assert!(matches!(
            ObddManager::from_file(&duplicate_triple),
            Err(ObddError::InvalidFile(_))
        ));

        let unreachable = ObddFile {
            n: 2,
            order: vec![1, 2],
            nodes: vec![
                ObddFileNode { id: 2, var: 2, lo: FALSE_ID, hi: TRUE_ID },
                ObddFileNode { id: 3, var: 1, lo: FALSE_ID, hi: TRUE_ID },
            ],
            root: 3,
        };
        assert!(matches!(
            ObddManager::from_file(&unreachable),
            Err(ObddError::InvalidFile(_))
        ));
    }

    #[test]
    fn load_into_shares_structure_and_checks_order() {
        let mut mgr = identity_manager(2);
        let a = mgr.build(&Formula::parse("x1 | x2", 2).unwrap()).unwrap();
        let file = mgr.to_file(a).unwrap();
        let b = mgr.load_file(&file).unwrap();
        assert!(mgr.equivalent(a, b).unwrap());

        let mut other_order = file.clone();
        other_order.order = vec![2, 1];
        assert_eq!(mgr.load_file(&other_order).unwrap_err(), ObddError::OrderMismatch);
    }
}
