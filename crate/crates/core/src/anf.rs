//! Sparse algebraic normal forms over a segmented variable space.
//!
//! An [`Anf`] is an XOR-set of [`Monomial`]s: inserting a monomial that is
//! already present removes it, so the term set is always the unique ANF of
//! the function it denotes and structural equality is functional equality.

use std::collections::hash_map::Entry;
use std::fmt;
use std::sync::Arc;

use rustc_hash::{FxHashMap, FxHashSet};

use crate::bits::BitMask;
use crate::error::{Error, Result};

/// Default ceiling on the number of terms `multiply` and `substitute` may
/// produce.
pub const DEFAULT_TERM_LIMIT: usize = 1 << 22;

/// A named, contiguous run of variable indices.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Segment {
    name: String,
    start: usize,
    len: usize,
}

impl Segment {
    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn end(&self) -> usize {
        self.start + self.len
    }

    /// Global index of the `offset`-th variable of this segment.
    pub fn var(&self, offset: usize) -> usize {
        debug_assert!(offset < self.len);
        self.start + offset
    }

    pub fn contains(&self, index: usize) -> bool {
        (self.start..self.end()).contains(&index)
    }
}

/// The variables an [`Anf`] may mention, partitioned into named segments laid
/// out back to back from index 0.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct VarSpace {
    width: usize,
    segments: Vec<Segment>,
}

impl VarSpace {
    /// Lays the segments out contiguously in the given order.
    pub fn new<S: Into<String>>(segments: impl IntoIterator<Item = (S, usize)>) -> Result<Self> {
        let mut laid_out: Vec<Segment> = Vec::new();
        let mut width = 0;
        for (name, len) in segments {
            let name = name.into();
            if len == 0 {
                return Err(Error::EmptySegment(name));
            }
            if laid_out.iter().any(|s| s.name == name) {
                return Err(Error::DuplicateSegment(name));
            }
            laid_out.push(Segment {
                name,
                start: width,
                len,
            });
            width += len;
        }
        if laid_out.is_empty() {
            return Err(Error::EmptySegment(String::new()));
        }
        Ok(VarSpace {
            width,
            segments: laid_out,
        })
    }

    /// A single segment `x` of `width` variables.
    pub fn flat(width: usize) -> Arc<Self> {
        Arc::new(VarSpace::new([("x", width)]).expect("a single non-empty segment is valid"))
    }

    pub fn width(&self) -> usize {
        self.width
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn segment(&self, name: &str) -> Result<&Segment> {
        self.segments
            .iter()
            .find(|s| s.name == name)
            .ok_or_else(|| Error::UnknownSegment(name.to_string()))
    }

    /// Looks up a segment and checks it has exactly `len` variables.
    pub fn segment_of_width(&self, name: &str, len: usize) -> Result<&Segment> {
        let seg = self.segment(name)?;
        if seg.len != len {
            return Err(Error::SegmentWidth {
                name: name.to_string(),
                expected: len,
                actual: seg.len,
            });
        }
        Ok(seg)
    }

    /// Segment holding variable `index`.
    pub fn segment_of(&self, index: usize) -> Option<&Segment> {
        self.segments.iter().find(|s| s.contains(index))
    }
}

fn same_space(a: &Arc<VarSpace>, b: &Arc<VarSpace>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

/// Product of distinct variables; the empty product is the constant 1.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial(BitMask);

impl Monomial {
    pub fn one(width: usize) -> Self {
        Monomial(BitMask::zeros(width))
    }

    pub fn from_vars(width: usize, vars: impl IntoIterator<Item = usize>) -> Result<Self> {
        let mut mask = BitMask::zeros(width);
        for v in vars {
            if v >= width {
                return Err(Error::VariableOutOfRange { index: v, width });
            }
            mask.set(v);
        }
        Ok(Monomial(mask))
    }

    pub fn from_mask(mask: BitMask) -> Self {
        Monomial(mask)
    }

    pub fn mask(&self) -> &BitMask {
        &self.0
    }

    pub fn contains(&self, var: usize) -> bool {
        self.0.get(var)
    }

    pub fn vars(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.ones()
    }

    pub fn degree(&self) -> usize {
        self.0.count_ones()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    /// Idempotent product: the union of the variable sets.
    pub fn times(&self, other: &Monomial) -> Monomial {
        Monomial(self.0.union(&other.0))
    }

    #[inline]
    fn is_satisfied_by(&self, assignment: &Assignment) -> bool {
        self.0.is_subset_of(&assignment.bits)
    }

    fn fmt_with_base(&self, f: &mut impl fmt::Write, base: usize) -> fmt::Result {
        if self.is_one() {
            return f.write_char('1');
        }
        for v in self.vars() {
            write!(f, "x{}", v + base)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.fmt_with_base(f, 0)
    }
}

/// Concrete values for the first `len` variables of a space.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Assignment {
    bits: BitMask,
    len: usize,
}

impl Assignment {
    pub fn from_bits(bits: impl IntoIterator<Item = bool>) -> Self {
        let values: Vec<bool> = bits.into_iter().collect();
        let mut mask = BitMask::zeros(values.len().max(1));
        for (i, &b) in values.iter().enumerate() {
            mask.assign(i, b);
        }
        Assignment {
            bits: mask,
            len: values.len(),
        }
    }

    /// Bit `i` of the result is bit `i` of the concatenated big-endian bytes,
    /// most significant bit first.
    pub fn from_bytes(bytes: &[u8]) -> Self {
        let mut words = Vec::with_capacity(bytes.len().div_ceil(8));
        for chunk in bytes.chunks(8) {
            let mut buf = [0u8; 8];
            buf[..chunk.len()].copy_from_slice(chunk);
            words.push(u64::from_be_bytes(buf));
        }
        Assignment {
            bits: BitMask::from_words(words),
            len: bytes.len() * 8,
        }
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn get(&self, index: usize) -> Option<bool> {
        (index < self.len).then(|| self.bits.get(index))
    }
}

/// Algebraic normal form: an XOR of monomials over a [`VarSpace`].
#[derive(Clone)]
pub struct Anf {
    space: Arc<VarSpace>,
    terms: FxHashSet<Monomial>,
}

impl PartialEq for Anf {
    fn eq(&self, other: &Self) -> bool {
        same_space(&self.space, &other.space) && self.terms == other.terms
    }
}

impl Eq for Anf {}

impl Anf {
    pub fn zero(space: &Arc<VarSpace>) -> Self {
        Anf {
            space: Arc::clone(space),
            terms: FxHashSet::default(),
        }
    }

    pub fn one(space: &Arc<VarSpace>) -> Self {
        let mut anf = Self::zero(space);
        anf.terms.insert(Monomial::one(space.width()));
        anf
    }

    pub fn constant(space: &Arc<VarSpace>, value: bool) -> Self {
        if value {
            Self::one(space)
        } else {
            Self::zero(space)
        }
    }

    pub fn var(space: &Arc<VarSpace>, index: usize) -> Result<Self> {
        Self::from_monomials(space, [Monomial::from_vars(space.width(), [index])?])
    }

    /// XOR-accumulates the given monomials, so repeated ones cancel.
    pub fn from_monomials(
        space: &Arc<VarSpace>,
        monomials: impl IntoIterator<Item = Monomial>,
    ) -> Result<Self> {
        let mut anf = Self::zero(space);
        for m in monomials {
            if let Some(v) = m.mask().last_one() {
                if v >= space.width() {
                    return Err(Error::VariableOutOfRange {
                        index: v,
                        width: space.width(),
                    });
                }
            }
            anf.toggle(m);
        }
        Ok(anf)
    }

    /// Convenience constructor from index lists; an empty list is the constant 1.
    pub fn from_var_sets<I, V>(space: &Arc<VarSpace>, sets: I) -> Result<Self>
    where
        I: IntoIterator<Item = V>,
        V: IntoIterator<Item = usize>,
    {
        let width = space.width();
        let monomials = sets
            .into_iter()
            .map(|vars| Monomial::from_vars(width, vars))
            .collect::<Result<Vec<_>>>()?;
        Self::from_monomials(space, monomials)
    }

    pub fn space(&self) -> &Arc<VarSpace> {
        &self.space
    }

    pub fn width(&self) -> usize {
        self.space.width()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn contains(&self, monomial: &Monomial) -> bool {
        self.terms.contains(monomial)
    }

    pub fn contains_vars(&self, vars: impl IntoIterator<Item = usize>) -> bool {
        Monomial::from_vars(self.width(), vars).is_ok_and(|m| self.contains(&m))
    }

    /// Whether the constant monomial 1 is present.
    pub fn constant_term(&self) -> bool {
        self.contains(&Monomial::one(self.width()))
    }

    /// Terms in no particular order.
    pub fn terms(&self) -> impl Iterator<Item = &Monomial> {
        self.terms.iter()
    }

    /// Terms in canonical order: ascending by mask read as a big-endian
    /// integer with variable 0 most significant.
    pub fn sorted_terms(&self) -> Vec<&Monomial> {
        let mut terms: Vec<&Monomial> = self.terms.iter().collect();
        terms.sort_unstable();
        terms
    }

    /// Adds `monomial` modulo 2.
    pub fn toggle(&mut self, monomial: Monomial) {
        if !self.terms.remove(&monomial) {
            self.terms.insert(monomial);
        }
    }

    /// Size of the largest monomial, or -1 for the zero function.
    pub fn degree(&self) -> i32 {
        self.terms
            .iter()
            .map(|m| m.degree() as i32)
            .max()
            .unwrap_or(-1)
    }

    /// Every variable that occurs in some term.
    pub fn variables(&self) -> BitMask {
        self.terms
            .iter()
            .fold(BitMask::zeros(self.width()), |acc, m| acc.union(m.mask()))
    }

    fn check_space(&self, other: &Anf) -> Result<()> {
        if same_space(&self.space, &other.space) {
            Ok(())
        } else {
            Err(Error::SpaceMismatch)
        }
    }

    pub fn xor(&self, other: &Anf) -> Result<Anf> {
        let mut out = self.clone();
        out.xor_assign(other)?;
        Ok(out)
    }

    pub fn xor_assign(&mut self, other: &Anf) -> Result<()> {
        self.check_space(other)?;
        for m in &other.terms {
            if !self.terms.remove(m) {
                self.terms.insert(m.clone());
            }
        }
        Ok(())
    }

    pub fn multiply(&self, other: &Anf) -> Result<Anf> {
        self.multiply_bounded(other, DEFAULT_TERM_LIMIT)
    }

    /// Product with a ceiling on the intermediate term count.
    pub fn multiply_bounded(&self, other: &Anf, limit: usize) -> Result<Anf> {
        self.check_space(other)?;
        let mut parity: FxHashMap<Monomial, bool> = FxHashMap::default();
        for a in &self.terms {
            for b in &other.terms {
                match parity.entry(a.times(b)) {
                    Entry::Occupied(mut e) => *e.get_mut() ^= true,
                    Entry::Vacant(e) => {
                        e.insert(true);
                    }
                }
            }
            if parity.len() > limit {
                return Err(Error::TermLimit { limit });
            }
        }
        let terms: FxHashSet<Monomial> = parity
            .into_iter()
            .filter_map(|(m, odd)| odd.then_some(m))
            .collect();
        if terms.len() > limit {
            return Err(Error::TermLimit { limit });
        }
        Ok(Anf {
            space: Arc::clone(&self.space),
            terms,
        })
    }

    /// Composes `self` with `bindings`: each variable `i` is replaced by
    /// `bindings(i)`, all of which must live in `target`.
    pub fn substitute<'a, F>(&self, target: &Arc<VarSpace>, bindings: F) -> Result<Anf>
    where
        F: Fn(usize) -> Option<&'a Anf>,
    {
        self.substitute_bounded(target, bindings, DEFAULT_TERM_LIMIT)
    }

    /// [`Anf::substitute`] with `bindings[i]` bound to variable `i`.
    pub fn substitute_all(&self, bindings: &[Anf]) -> Result<Anf> {
        let target = match bindings.first() {
            Some(b) => Arc::clone(&b.space),
            None if self.terms.iter().all(Monomial::is_one) => {
                return Ok(self.clone());
            }
            None => {
                let v = self.variables().ones().next().unwrap_or(0);
                return Err(Error::UnboundVariable(v));
            }
        };
        self.substitute(&target, |i| bindings.get(i))
    }

    pub fn substitute_bounded<'a, F>(
        &self,
        target: &Arc<VarSpace>,
        bindings: F,
        limit: usize,
    ) -> Result<Anf>
    where
        F: Fn(usize) -> Option<&'a Anf>,
    {
        let mut out = Anf::zero(target);
        for term in self.sorted_terms() {
            let mut product = Anf::one(target);
            for v in term.vars() {
                let bound = bindings(v).ok_or(Error::UnboundVariable(v))?;
                if !same_space(&bound.space, target) {
                    return Err(Error::SpaceMismatch);
                }
                product = if product.len() == 1 && product.constant_term() {
                    bound.clone()
                } else {
                    product.multiply_bounded(bound, limit)?
                };
                if product.is_zero() {
                    break;
                }
            }
            out.xor_assign(&product)?;
            if out.len() > limit {
                return Err(Error::TermLimit { limit });
            }
        }
        Ok(out)
    }

    /// Moves every variable `i` to `map(i)` in `target`. The map must be
    /// injective on the source space.
    pub fn rename<F>(&self, target: &Arc<VarSpace>, map: F) -> Result<Anf>
    where
        F: Fn(usize) -> usize,
    {
        let width = target.width();
        let mut images = vec![usize::MAX; self.width()];
        let mut hit = BitMask::zeros(width);
        for (i, slot) in images.iter_mut().enumerate() {
            let j = map(i);
            if j >= width {
                return Err(Error::VariableOutOfRange { index: j, width });
            }
            if hit.get(j) {
                return Err(Error::NonInjectiveRename(j));
            }
            hit.set(j);
            *slot = j;
        }
        let terms = self
            .terms
            .iter()
            .map(|m| Monomial(BitMask::from_indices(width, m.vars().map(|v| images[v]))))
            .collect();
        Ok(Anf {
            space: Arc::clone(target),
            terms,
        })
    }

    /// Renames through an explicit permutation table: variable `i` goes to
    /// `table[i]`.
    pub fn rename_with(&self, target: &Arc<VarSpace>, table: &[usize]) -> Result<Anf> {
        if table.len() < self.width() {
            return Err(Error::UnboundVariable(table.len()));
        }
        self.rename(target, |i| table[i])
    }

    /// Shifts every variable by `offset`.
    pub fn rename_offset(&self, target: &Arc<VarSpace>, offset: isize) -> Result<Anf> {
        let vars = self.variables();
        for v in vars.ones() {
            let moved = v as isize + offset;
            if moved < 0 || moved as usize >= target.width() {
                return Err(Error::VariableOutOfRange {
                    index: moved.max(0) as usize,
                    width: target.width(),
                });
            }
        }
        let width = target.width();
        let terms = self
            .terms
            .iter()
            .map(|m| {
                Monomial(BitMask::from_indices(
                    width,
                    m.vars().map(|v| (v as isize + offset) as usize),
                ))
            })
            .collect();
        Ok(Anf {
            space: Arc::clone(target),
            terms,
        })
    }

    /// XOR over the terms of the AND of each term's variables.
    pub fn evaluate(&self, assignment: &Assignment) -> Result<bool> {
        if let Some(v) = self.variables().last_one() {
            if v >= assignment.len() {
                return Err(Error::MissingAssignment {
                    index: v,
                    len: assignment.len(),
                });
            }
        }
        Ok(self.evaluate_unchecked(assignment))
    }

    /// Evaluation without the coverage check; unassigned variables read as 0.
    #[inline]
    pub fn evaluate_unchecked(&self, assignment: &Assignment) -> bool {
        self.terms
            .iter()
            .filter(|m| m.is_satisfied_by(assignment))
            .count()
            % 2
            == 1
    }

    /// Canonical-order rendering with variables numbered from `base`.
    pub fn to_string_with_base(&self, base: usize) -> String {
        if self.is_zero() {
            return "0".to_string();
        }
        let mut out = String::new();
        for (i, m) in self.sorted_terms().into_iter().enumerate() {
            if i > 0 {
                out.push_str(" + ");
            }
            m.fmt_with_base(&mut out, base)
                .expect("writing to a String");
        }
        out
    }
}

impl fmt::Display for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_string_with_base(0))
    }
}

impl fmt::Debug for Anf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Anf[{}]({})", self.width(), self)
    }
}
