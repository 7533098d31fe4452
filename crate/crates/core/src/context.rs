//! Binarization of a relation into a formal context whose objects are the
//! unordered pairs of distinct tuples and whose incidence records agreement.
//!
//! An FD `X -> Y` holds in the relation exactly when the implication `X -> Y`
//! holds in this context.

use std::fmt::Write as _;

use crate::relation::{AttrSet, Relation};

/// Indices into [`FormalContext::objects`], ascending.
pub type ObjectSet = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormalContext {
    /// Object labels: tuple-index pairs `(i, j)` with `i < j`.
    objects: Vec<(usize, usize)>,
    attributes: Vec<String>,
    words_per_row: usize,
    /// One bit-row per object, `words_per_row` words each.
    incidence: Vec<u64>,
}

impl FormalContext {
    pub fn objects(&self) -> &[(usize, usize)] {
        &self.objects
    }

    pub fn attributes(&self) -> &[String] {
        &self.attributes
    }

    pub fn n_objects(&self) -> usize {
        self.objects.len()
    }

    pub fn n_attrs(&self) -> usize {
        self.attributes.len()
    }

    fn row(&self, obj: usize) -> &[u64] {
        &self.incidence[obj * self.words_per_row..(obj + 1) * self.words_per_row]
    }

    pub fn incident(&self, obj: usize, attr: usize) -> bool {
        self.row(obj)[attr / 64] >> (attr % 64) & 1 == 1
    }

    fn mask_of(&self, xs: &AttrSet) -> Vec<u64> {
        assert!(
            xs.iter().all(|a| a < self.n_attrs()),
            "attribute set {xs} out of range for context with {} attributes",
            self.n_attrs()
        );
        let mut m = vec![0u64; self.words_per_row];
        for a in xs.iter() {
            m[a / 64] |= 1 << (a % 64);
        }
        m
    }

    /// Burmeister `.cxt` rendering.
    pub fn to_burmeister(&self) -> String {
        let mut s = String::new();
        writeln!(s, "B").unwrap();
        writeln!(s).unwrap();
        writeln!(s, "{}", self.n_objects()).unwrap();
        writeln!(s, "{}", self.n_attrs()).unwrap();
        writeln!(s).unwrap();
        for (i, j) in &self.objects {
            writeln!(s, "{i},{j}").unwrap();
        }
        for a in &self.attributes {
            writeln!(s, "{a}").unwrap();
        }
        for o in 0..self.n_objects() {
            for a in 0..self.n_attrs() {
                s.push(if self.incident(o, a) { 'X' } else { '.' });
            }
            s.push('\n');
        }
        s
    }
}

/// Builds the agreement context with one object per unordered pair of
/// distinct tuples, `C(n, 2)` objects in total.
pub fn binarize(rel: &Relation) -> FormalContext {
    let n = rel.n_tuples();
    let m = rel.n_attrs();
    let words_per_row = m.div_ceil(64).max(1);
    let n_pairs = n * n.saturating_sub(1) / 2;
    let mut objects = Vec::with_capacity(n_pairs);
    let mut incidence = vec![0u64; n_pairs * words_per_row];
    for i in 0..n {
        for j in i + 1..n {
            let base = objects.len() * words_per_row;
            for a in 0..m {
                let col = rel.column(a);
                if col[i] == col[j] {
                    incidence[base + a / 64] |= 1 << (a % 64);
                }
            }
            objects.push((i, j));
        }
    }
    FormalContext {
        objects,
        attributes: rel.attributes().to_vec(),
        words_per_row,
        incidence,
    }
}

/// Derivation `X'`: every object incident with all attributes of `xs`.
pub fn extent(ctx: &FormalContext, xs: &AttrSet) -> ObjectSet {
    let mask = ctx.mask_of(xs);
    (0..ctx.n_objects())
        .filter(|&o| ctx.row(o).iter().zip(&mask).all(|(r, m)| r & m == *m))
        .collect()
}

/// Double derivation `X''`.
pub fn attr_closure(ctx: &FormalContext, xs: &AttrSet) -> AttrSet {
    let mut acc = vec![!0u64; ctx.words_per_row];
    for o in extent(ctx, xs) {
        for (w, r) in acc.iter_mut().zip(ctx.row(o)) {
            *w &= r;
        }
    }
    (0..ctx.n_attrs())
        .filter(|&a| acc[a / 64] >> (a % 64) & 1 == 1)
        .collect()
}

/// Whether `xs -> ys` holds as an implication in the context.
pub fn implication_holds(ctx: &FormalContext, xs: &AttrSet, ys: &AttrSet) -> bool {
    let need = ctx.mask_of(ys);
    let premise = ctx.mask_of(xs);
    (0..ctx.n_objects()).all(|o| {
        let row = ctx.row(o);
        let has_premise = row.iter().zip(&premise).all(|(r, m)| r & m == *m);
        !has_premise || row.iter().zip(&need).all(|(r, m)| r & m == *m)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn two_rows() -> Relation {
        Relation::from_str_rows(&["a", "b"], &[&["1", "2"], &["1", "3"]]).unwrap()
    }

    #[test]
    fn binarize_single_pair() {
        let ctx = binarize(&two_rows());
        assert_eq!(ctx.objects(), &[(0, 1)]);
        assert!(ctx.incident(0, 0));
        assert!(!ctx.incident(0, 1));
    }

    #[test]
    fn binarize_degenerate_sizes() {
        let one = Relation::from_str_rows(&["a"], &[&["1"]]).unwrap();
        assert_eq!(binarize(&one).n_objects(), 0);
        let none = Relation::from_str_rows(&["a"], &[]).unwrap();
        assert_eq!(binarize(&none).n_objects(), 0);
    }

    #[test]
    fn binarize_identical_tuples() {
        let r =
            Relation::from_str_rows(&["a", "b"], &[&["1", "1"], &["1", "1"], &["2", "2"]]).unwrap();
        let ctx = binarize(&r);
        assert_eq!(ctx.n_objects(), 3);
        assert_eq!(ctx.objects()[0], (0, 1));
        assert!(ctx.incident(0, 0) && ctx.incident(0, 1));
    }

    #[test]
    fn extent_examples() {
        let ctx = binarize(&two_rows());
        assert_eq!(extent(&ctx, &AttrSet::single(0)), vec![0]);
        assert!(extent(&ctx, &AttrSet::full(2)).is_empty());
        assert_eq!(extent(&ctx, &AttrSet::empty()), vec![0]);
    }

    #[test]
    fn closure_examples() {
        let empty =
            binarize(&Relation::from_str_rows(&["a", "b", "c"], &[&["1", "2", "3"]]).unwrap());
        assert_eq!(attr_closure(&empty, &AttrSet::empty()), AttrSet::full(3));

        let r = Relation::from_str_rows(
            &["a", "b", "c"],
            &[&["1", "1", "1"], &["1", "1", "2"], &["2", "3", "3"]],
        )
        .unwrap();
        let ctx = binarize(&r);
        // Pairs: (0,1) agree on a,b; (0,2) and (1,2) agree on nothing.
        assert_eq!(
            attr_closure(&ctx, &AttrSet::single(0)),
            AttrSet::new([0, 1])
        );
        let closed = AttrSet::new([0, 1]);
        assert_eq!(attr_closure(&ctx, &closed), closed);
    }

    #[test]
    fn implication_examples() {
        let ctx = binarize(&two_rows());
        assert!(implication_holds(
            &ctx,
            &AttrSet::single(1),
            &AttrSet::single(0)
        ));
        assert!(!implication_holds(
            &ctx,
            &AttrSet::single(0),
            &AttrSet::single(1)
        ));
        assert!(implication_holds(
            &ctx,
            &AttrSet::single(0),
            &AttrSet::single(0)
        ));
    }

    #[test]
    fn wide_context_crosses_word_boundary() {
        let names: Vec<String> = (0..70).map(|i| format!("c{i}")).collect();
        let mut r0: Vec<String> = (0..70).map(|i| i.to_string()).collect();
        let r1 = r0.clone();
        r0[66] = "x".into();
        let rel = Relation::new(names, vec![r0, r1], Default::default()).unwrap();
        let ctx = binarize(&rel);
        assert!(ctx.incident(0, 65));
        assert!(!ctx.incident(0, 66));
        assert!(!implication_holds(
            &ctx,
            &AttrSet::single(0),
            &AttrSet::single(66)
        ));
        assert_eq!(attr_closure(&ctx, &AttrSet::empty()).len(), 69);
    }

    #[test]
    fn burmeister_layout() {
        let out = binarize(&two_rows()).to_burmeister();
        assert_eq!(out, "B\n\n1\n2\n\n0,1\na\nb\nX.\n");
    }
}
