//! The boolean carrier: sets of actions under union and intersection.
//!
//! Every matrix carries its *universe*, the full action set that plays the
//! role of `1`. The universe of a model is its visible alphabet plus the
//! silent action, so `1` is never the empty set even for an empty alphabet,
//! and a `{tau}`-free matrix multiplied by `{tau}` is always zero.

use std::fmt;

use crate::error::{Error, Result};

/// Reserved label of the silent action.
pub const TAU: &str = "tau";

/// Largest visible alphabet; one more bit is reserved for `tau`.
pub const MAX_ACTIONS: usize = 127;

/// A subset of a model's action universe, one bit per action.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ActionSet(u128);

impl ActionSet {
    pub const EMPTY: ActionSet = ActionSet(0);

    pub fn singleton(index: usize) -> Self {
        assert!(index <= MAX_ACTIONS, "action index {index} out of range");
        ActionSet(1u128 << index)
    }

    /// The set of the first `width` actions.
    pub fn first(width: usize) -> Self {
        assert!(width <= MAX_ACTIONS + 1);
        if width == 128 {
            ActionSet(u128::MAX)
        } else {
            ActionSet((1u128 << width) - 1)
        }
    }

    pub fn bits(self) -> u128 {
        self.0
    }

    pub fn from_bits(bits: u128) -> Self {
        ActionSet(bits)
    }

    pub fn union(self, other: Self) -> Self {
        ActionSet(self.0 | other.0)
    }

    pub fn intersect(self, other: Self) -> Self {
        ActionSet(self.0 & other.0)
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, index: usize) -> bool {
        index < 128 && self.0 >> index & 1 == 1
    }

    pub fn is_subset(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..128).filter(move |&i| self.contains(i))
    }
}

impl fmt::Debug for ActionSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.indices()).finish()
    }
}

/// Ordered visible action labels of a model. `tau` is implicit and occupies
/// the bit right after the last visible action.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ActionAlphabet {
    names: Vec<String>,
}

impl ActionAlphabet {
    pub fn new<I, S>(names: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.len() > MAX_ACTIONS {
            return Err(Error::InvalidAlphabet(format!(
                "{} labels exceed the limit of {MAX_ACTIONS}",
                names.len()
            )));
        }
        for (i, name) in names.iter().enumerate() {
            if name.is_empty() {
                return Err(Error::InvalidAlphabet("empty label".into()));
            }
            if name == TAU {
                return Err(Error::InvalidAlphabet(
                    "`tau` is reserved for the silent action".into(),
                ));
            }
            if name.chars().any(char::is_whitespace) {
                return Err(Error::InvalidAlphabet(format!("label `{name}` contains whitespace")));
            }
            if names[..i].contains(name) {
                return Err(Error::InvalidAlphabet(format!("duplicate label `{name}`")));
            }
        }
        Ok(ActionAlphabet { names })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.names.iter().position(|n| n == label)
    }

    /// Bit index used for `tau`.
    pub fn tau_index(&self) -> usize {
        self.names.len()
    }

    pub fn tau(&self) -> ActionSet {
        ActionSet::singleton(self.tau_index())
    }

    /// All visible actions.
    pub fn visible(&self) -> ActionSet {
        ActionSet::first(self.names.len())
    }

    /// Visible actions plus `tau`: the `1` of the semiring.
    pub fn universe(&self) -> ActionSet {
        ActionSet::first(self.names.len() + 1)
    }

    pub fn set_of<'a, I>(&self, labels: I) -> Result<ActionSet>
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut set = ActionSet::EMPTY;
        for label in labels {
            let index = if label == TAU {
                self.tau_index()
            } else {
                self.index_of(label).ok_or_else(|| {
                    Error::InvalidAlphabet(format!("unknown label `{label}`"))
                })?
            };
            set = set.union(ActionSet::singleton(index));
        }
        Ok(set)
    }

    pub fn label(&self, index: usize) -> &str {
        if index == self.tau_index() {
            TAU
        } else {
            &self.names[index]
        }
    }

    /// `0` for the empty set, `1` for the universe, `{a,b}` otherwise.
    pub fn render(&self, set: ActionSet) -> String {
        if set.is_empty() {
            return "0".into();
        }
        if set == self.universe() {
            return "1".into();
        }
        let labels: Vec<&str> = set.indices().map(|i| self.label(i)).collect();
        format!("{{{}}}", labels.join(","))
    }
}

/// Dense matrix over the action-set semiring.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct ActionMatrix {
    rows: usize,
    cols: usize,
    universe: ActionSet,
    data: Vec<ActionSet>,
}

impl ActionMatrix {
    pub fn zeros(rows: usize, cols: usize, universe: ActionSet) -> Self {
        ActionMatrix {
            rows,
            cols,
            universe,
            data: vec![ActionSet::EMPTY; rows * cols],
        }
    }

    pub fn ones(rows: usize, cols: usize, universe: ActionSet) -> Self {
        ActionMatrix {
            rows,
            cols,
            universe,
            data: vec![universe; rows * cols],
        }
    }

    pub fn identity(n: usize, universe: ActionSet) -> Self {
        let mut m = Self::zeros(n, n, universe);
        for i in 0..n {
            m.set(i, i, universe);
        }
        m
    }

    pub fn from_fn(
        rows: usize,
        cols: usize,
        universe: ActionSet,
        mut f: impl FnMut(usize, usize) -> ActionSet,
    ) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j).intersect(universe));
            }
        }
        ActionMatrix {
            rows,
            cols,
            universe,
            data,
        }
    }

    /// 0-1 matrix from a boolean pattern.
    pub fn from_bools(
        rows: usize,
        cols: usize,
        universe: ActionSet,
        mut f: impl FnMut(usize, usize) -> bool,
    ) -> Self {
        Self::from_fn(rows, cols, universe, |i, j| {
            if f(i, j) {
                universe
            } else {
                ActionSet::EMPTY
            }
        })
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.rows, self.cols)
    }

    pub fn universe(&self) -> ActionSet {
        self.universe
    }

    pub fn get(&self, i: usize, j: usize) -> ActionSet {
        self.data[i * self.cols + j]
    }

    /// Sets an entry; bits outside the universe are dropped.
    pub fn set(&mut self, i: usize, j: usize, value: ActionSet) {
        self.data[i * self.cols + j] = value.intersect(self.universe);
    }

    pub fn row(&self, i: usize) -> &[ActionSet] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// True for 1-valued entries of a 0-1 matrix.
    pub fn is_one(&self, i: usize, j: usize) -> bool {
        self.get(i, j) == self.universe
    }

    pub fn is_zero_one(&self) -> bool {
        self.data
            .iter()
            .all(|&e| e.is_empty() || e == self.universe)
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|e| e.is_empty())
    }

    fn same_shape(&self, other: &Self, op: &'static str) -> Result<()> {
        if self.dims() != other.dims() {
            return Err(Error::DimensionMismatch {
                op,
                left: self.dims(),
                right: other.dims(),
            });
        }
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch { op });
        }
        Ok(())
    }

    /// Entrywise union.
    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "add")?;
        Ok(self.zip_with(other, ActionSet::union))
    }

    /// Entrywise intersection (the elementwise product).
    pub fn elementwise(&self, other: &Self) -> Result<Self> {
        self.same_shape(other, "elementwise")?;
        Ok(self.zip_with(other, ActionSet::intersect))
    }

    fn zip_with(&self, other: &Self, f: impl Fn(ActionSet, ActionSet) -> ActionSet) -> Self {
        ActionMatrix {
            rows: self.rows,
            cols: self.cols,
            universe: self.universe,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(&a, &b)| f(a, b))
                .collect(),
        }
    }

    /// Semiring product: entry `(i, j)` is the union over `k` of
    /// `self[i, k] ∩ other[k, j]`.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.cols != other.rows {
            return Err(Error::DimensionMismatch {
                op: "mul",
                left: self.dims(),
                right: other.dims(),
            });
        }
        if self.universe != other.universe {
            return Err(Error::UniverseMismatch { op: "mul" });
        }
        let mut out = Self::zeros(self.rows, other.cols, self.universe);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_empty() {
                    continue;
                }
                for j in 0..other.cols {
                    let idx = i * other.cols + j;
                    out.data[idx] = out.data[idx].union(a.intersect(other.get(k, j)));
                }
            }
        }
        Ok(out)
    }

    /// Entrywise inclusion `self ≤ other`.
    pub fn leq(&self, other: &Self) -> Result<bool> {
        self.same_shape(other, "leq")?;
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .all(|(&a, &b)| a.is_subset(b)))
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, self.universe, |i, j| self.get(j, i))
    }

    /// Every entry multiplied by the scalar `s`.
    pub fn scale(&self, s: ActionSet) -> Self {
        Self::from_fn(self.rows, self.cols, self.universe, |i, j| self.get(i, j).intersect(s))
    }

    /// First `(row, col)` where the two matrices differ.
    pub fn first_difference(&self, other: &Self) -> Option<(usize, usize)> {
        if self.dims() != other.dims() {
            return Some((0, 0));
        }
        self.data
            .iter()
            .zip(&other.data)
            .position(|(a, b)| a != b)
            .map(|p| (p / self.cols, p % self.cols))
    }

    /// Reflexive-transitive closure `S* = Σ Sⁿ` of a square 0-1 matrix,
    /// computed with Warshall's recurrence.
    pub fn rt_closure(&self) -> Result<Self> {
        if self.rows != self.cols {
            return Err(Error::DimensionMismatch {
                op: "rt_closure",
                left: self.dims(),
                right: self.dims(),
            });
        }
        if !self.is_zero_one() {
            return Err(Error::NotZeroOne("rt_closure"));
        }
        let n = self.rows;
        let mut reach: Vec<Vec<bool>> = (0..n)
            .map(|i| (0..n).map(|j| i == j || self.is_one(i, j)).collect())
            .collect();
        for k in 0..n {
            let via = reach[k].clone();
            for row in reach.iter_mut() {
                if row[k] {
                    for (r, &v) in row.iter_mut().zip(&via) {
                        *r |= v;
                    }
                }
            }
        }
        Ok(Self::from_bools(n, n, self.universe, |i, j| reach[i][j]))
    }

    pub fn display<'a>(&'a self, alphabet: &'a ActionAlphabet) -> MatrixDisplay<'a> {
        MatrixDisplay {
            matrix: self,
            alphabet,
        }
    }
}

impl fmt::Debug for ActionMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ActionMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

pub struct MatrixDisplay<'a> {
    matrix: &'a ActionMatrix,
    alphabet: &'a ActionAlphabet,
}

impl fmt::Display for MatrixDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.matrix.rows {
            let cells: Vec<String> = self
                .matrix
                .row(i)
                .iter()
                .map(|&s| self.alphabet.render(s))
                .collect();
            writeln!(f, "{}", cells.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn abc() -> ActionAlphabet {
        ActionAlphabet::new(["a", "b", "c"]).unwrap()
    }

    #[test]
    fn alphabet_rejects_tau_duplicates_and_empty() {
        assert!(ActionAlphabet::new(["a", "tau"]).is_err());
        assert!(ActionAlphabet::new(["a", "a"]).is_err());
        assert!(ActionAlphabet::new([""]).is_err());
        assert!(ActionAlphabet::new(Vec::<String>::new()).is_ok());
    }

    #[test]
    fn universe_includes_tau_even_for_empty_alphabet() {
        let empty = ActionAlphabet::default();
        assert_eq!(empty.universe(), empty.tau());
        assert!(!empty.universe().is_empty());
    }

    #[test]
    fn add_is_union() {
        let al = abc();
        let u = al.universe();
        let m = ActionMatrix::from_fn(1, 1, u, |_, _| al.set_of(["a"]).unwrap());
        let n = ActionMatrix::from_fn(1, 1, u, |_, _| al.set_of(["b"]).unwrap());
        let sum = m.add(&n).unwrap();
        assert_eq!(sum.get(0, 0), al.set_of(["a", "b"]).unwrap());
        assert_eq!(m.add(&ActionMatrix::zeros(1, 1, u)).unwrap(), m);
    }

    #[test]
    fn product_by_hand() {
        // [[{a},{b}],[0,0]] · [[0,0],[{b},0]] = [[{b},0],[0,0]]
        let al = abc();
        let u = al.universe();
        let a = al.set_of(["a"]).unwrap();
        let b = al.set_of(["b"]).unwrap();
        let m = ActionMatrix::from_fn(2, 2, u, |i, j| match (i, j) {
            (0, 0) => a,
            (0, 1) => b,
            _ => ActionSet::EMPTY,
        });
        let n = ActionMatrix::from_fn(2, 2, u, |i, j| if (i, j) == (1, 0) { b } else { ActionSet::EMPTY });
        let p = m.mul(&n).unwrap();
        let expected = ActionMatrix::from_fn(2, 2, u, |i, j| if (i, j) == (0, 0) { b } else { ActionSet::EMPTY });
        assert_eq!(p, expected);
        assert_eq!(ActionMatrix::identity(2, u).mul(&m).unwrap(), m);
    }

    #[test]
    fn dimension_and_universe_errors() {
        let u = abc().universe();
        let m = ActionMatrix::zeros(2, 3, u);
        assert!(matches!(m.mul(&m), Err(Error::DimensionMismatch { .. })));
        assert!(matches!(
            m.add(&ActionMatrix::zeros(3, 2, u)),
            Err(Error::DimensionMismatch { .. })
        ));
        let other = ActionMatrix::zeros(2, 3, ActionSet::first(2));
        assert!(matches!(m.add(&other), Err(Error::UniverseMismatch { .. })));
    }

    #[test]
    fn leq_examples() {
        let al = abc();
        let u = al.universe();
        let ab = ActionMatrix::from_fn(1, 1, u, |_, _| al.set_of(["a", "b"]).unwrap());
        let a = ActionMatrix::from_fn(1, 1, u, |_, _| al.set_of(["a"]).unwrap());
        assert!(ab.leq(&ab).unwrap());
        assert!(ActionMatrix::zeros(1, 1, u).leq(&ab).unwrap());
        assert!(!ab.leq(&a).unwrap());
    }

    #[test]
    fn closure_examples() {
        let u = abc().universe();
        let edge = ActionMatrix::from_bools(2, 2, u, |i, j| (i, j) == (0, 1));
        let expected = ActionMatrix::from_bools(2, 2, u, |i, j| i <= j);
        assert_eq!(edge.rt_closure().unwrap(), expected);
        assert_eq!(
            ActionMatrix::zeros(4, 4, u).rt_closure().unwrap(),
            ActionMatrix::identity(4, u)
        );
        let cycle = ActionMatrix::from_bools(3, 3, u, |i, j| j == (i + 1) % 3);
        assert_eq!(cycle.rt_closure().unwrap(), ActionMatrix::ones(3, 3, u));
    }

    #[test]
    fn closure_rejects_non_zero_one() {
        let al = abc();
        let m = ActionMatrix::from_fn(2, 2, al.universe(), |_, _| al.set_of(["a"]).unwrap());
        assert!(matches!(m.rt_closure(), Err(Error::NotZeroOne(_))));
    }

    #[test]
    fn render_sets() {
        let al = abc();
        assert_eq!(al.render(ActionSet::EMPTY), "0");
        assert_eq!(al.render(al.universe()), "1");
        assert_eq!(al.render(al.set_of(["c", "a"]).unwrap()), "{a,c}");
        assert_eq!(al.render(al.tau()), "{tau}");
    }
}
