mod common;

use std::collections::{BTreeSet, HashMap};

use common::{fuss_catalan, patterns, permutations, seq, with_stars, word};
use tamari::order::{insert_stars, weak_bruhat_with_cap};
use tamari::{
    class_bottom, class_top, classify, hasse_dot, product_check, quotient, weak_bruhat, BlockPattern,
    LinearizedForest, Poset, StarSequence,
};

fn index_of(p: &Poset<StarSequence>, s: &StarSequence) -> usize {
    p.elements().iter().position(|e| e == s).unwrap()
}

#[test]
fn weak_bruhat_examples() {
    let s3 = weak_bruhat(&BlockPattern::plain(3)).unwrap();
    assert_eq!(s3.len(), 6);
    assert_eq!(s3.covers().len(), 6);
    let bottom = index_of(&s3, &seq("123", 2));
    let top = index_of(&s3, &seq("321", 2));
    assert!((0..6).all(|e| s3.leq(bottom, e) && s3.leq(e, top)));
    let s1 = weak_bruhat(&BlockPattern::plain(1)).unwrap();
    assert_eq!((s1.len(), s1.covers().len()), (1, 0));
    let prime = weak_bruhat(&BlockPattern::parse("_ _ * _").unwrap()).unwrap();
    assert_eq!((prime.len(), prime.covers().len()), (6, 6));
    assert!(prime.elements().iter().all(|e| e.terms()[2].is_star()));
}

#[test]
fn cover_labels_follow_the_transposition() {
    let p = weak_bruhat(&BlockPattern::parse("_ * _ _").unwrap()).unwrap();
    for (e, &(a, b)) in p.covers().iter().enumerate() {
        let i = p.cover_label(e).unwrap();
        assert!(p.elements()[a].is_left_of(i, i + 1));
        assert_eq!(p.elements()[a].transpose(i).unwrap(), p.elements()[b]);
    }
}

#[test]
fn classify_examples() {
    let s3 = weak_bruhat(&BlockPattern::plain(3)).unwrap();
    let c = classify(&s3).unwrap();
    let classes: BTreeSet<BTreeSet<String>> = (0..c.class_count())
        .map(|k| c.members(k).iter().map(|&e| s3.elements()[e].compact()).collect())
        .collect();
    let expected: BTreeSet<BTreeSet<String>> = [vec!["123"], vec!["213"], vec!["312"], vec!["321"], vec!["132", "231"]]
        .into_iter()
        .map(|v| v.into_iter().map(String::from).collect())
        .collect();
    assert_eq!(classes, expected);
    let prime = weak_bruhat(&BlockPattern::parse("_ _ * _").unwrap()).unwrap();
    assert_eq!(classify(&prime).unwrap().class_count(), 2);
    let s1 = weak_bruhat(&BlockPattern::plain(1)).unwrap();
    assert_eq!(classify(&s1).unwrap().class_count(), 1);
}

#[test]
fn endpoint_examples() {
    assert_eq!(class_top(&seq("132", 2)).unwrap(), seq("231", 2));
    assert_eq!(class_bottom(&seq("231", 2)).unwrap(), seq("132", 2));
    assert_eq!(class_top(&seq("321", 2)).unwrap(), seq("321", 2));
    let w = word("x2 x6 x0 x5 x0 x1 x0");
    assert_eq!(
        class_top(&seq("35176**24", 2)).unwrap(),
        StarSequence::from_word(&w.top_normal_form(2).unwrap(), 2).unwrap()
    );
    assert_eq!(
        class_bottom(&seq("35176**24", 2)).unwrap(),
        StarSequence::from_word(&w.bottom_normal_form(2).unwrap(), 2).unwrap()
    );
}

#[test]
fn quotient_examples() {
    for (n, size) in [(1, 1), (3, 5), (4, 14)] {
        let p = weak_bruhat(&BlockPattern::plain(n)).unwrap();
        let q = quotient(&p, &classify(&p).unwrap()).unwrap();
        assert_eq!(q.len(), size);
        assert!(q.is_lattice().is_lattice());
    }
}

#[test]
fn lattice_examples() {
    let chain = Poset::new(vec!['a', 'b', 'c'], vec![(0, 1), (1, 2)]).unwrap();
    assert!(chain.is_lattice().is_lattice());
    let bowtie = Poset::new(vec![0, 1, 2, 3], vec![(0, 2), (0, 3), (1, 2), (1, 3)]).unwrap();
    let verdict = bowtie.is_lattice();
    assert!(!verdict.is_lattice());
    assert!(verdict.witness().is_some());
}

#[test]
fn product_examples() {
    assert!(product_check(&BlockPattern::parse("_ _ * _").unwrap()).unwrap());
    assert!(product_check(&BlockPattern::plain(4)).unwrap());
    let p = BlockPattern::parse("_ * _ _ * _").unwrap();
    assert!(product_check(&p).unwrap());
    let w = weak_bruhat(&p).unwrap();
    assert_eq!(classify(&w).unwrap().class_count(), 2);
}

#[test]
fn dot_examples() {
    let s3 = weak_bruhat(&BlockPattern::plain(3)).unwrap();
    let dot = hasse_dot(&s3, Some(&classify(&s3).unwrap()));
    assert_eq!(dot.matches("[label=").count(), 6);
    assert_eq!(dot.matches(" -> ").count(), 6);
    assert_eq!(dot.matches("style=solid").count(), 1);
    let empty: Poset<StarSequence> = Poset::new(vec![], vec![]).unwrap();
    assert_eq!(hasse_dot(&empty, None), "digraph hasse {\n}\n");
    let s4 = weak_bruhat(&BlockPattern::plain(4)).unwrap();
    let l4 = quotient(&s4, &classify(&s4).unwrap()).unwrap();
    assert_eq!(hasse_dot(&l4, None).matches("[label=").count(), 14);
}

#[test]
fn caps() {
    assert!(weak_bruhat(&BlockPattern::plain(9)).is_err());
    assert!(weak_bruhat(&BlockPattern::parse("_ _ _ _ * _ _ _").unwrap()).is_err());
    assert!(weak_bruhat_with_cap(&BlockPattern::plain(3), 2).is_err());
}

/// Classes over every pattern with `n <= 5` are intervals with the right
/// endpoints, number `prod C_{m_i}`, and agree with the direct climbs.
#[test]
fn class_structure_over_patterns() {
    for n in 0..=5 {
        for pattern in patterns(n) {
            let p = weak_bruhat(&pattern).unwrap();
            let c = classify(&p).unwrap();
            let expected: usize = pattern.block_sizes().iter().map(|&m| fuss_catalan(2, m)).product();
            assert_eq!(c.class_count(), expected, "{pattern}");
            let up = p.up_sets();
            for class in 0..c.class_count() {
                let (b, t) = (c.bottom(class), c.top(class));
                let mut interval = up[b].clone();
                interval.intersect_with(&p.down_sets()[t]);
                let members: BTreeSet<usize> = c.members(class).into_iter().collect();
                assert_eq!(interval.ones().collect::<BTreeSet<_>>(), members);
                let (bs, ts) = (&p.elements()[b], &p.elements()[t]);
                assert!(!ts.occurs_132() && ts.inversion_word().is_top_normal());
                assert!(!bs.occurs_231() && bs.inversion_word().is_bottom_normal(2));
                for &m in &members {
                    assert_eq!(class_top(&p.elements()[m]).unwrap(), *ts);
                    assert_eq!(class_bottom(&p.elements()[m]).unwrap(), *bs);
                }
            }
        }
    }
}

#[test]
fn class_counts_are_catalan() {
    for n in 0..=7 {
        let p = weak_bruhat(&BlockPattern::plain(n)).unwrap();
        assert_eq!(classify(&p).unwrap().class_count(), fuss_catalan(2, n));
    }
}

#[test]
fn classes_refine_through_star_insertion() {
    for n in 1..=5 {
        let plain = weak_bruhat(&BlockPattern::plain(n)).unwrap();
        let pc = classify(&plain).unwrap();
        for pattern in patterns(n) {
            let starred = weak_bruhat(&pattern).unwrap();
            let sc = classify(&starred).unwrap();
            let index: HashMap<&StarSequence, usize> =
                starred.elements().iter().enumerate().map(|(i, e)| (e, i)).collect();
            let mut image: HashMap<usize, usize> = HashMap::new();
            for (i, s) in plain.elements().iter().enumerate() {
                let target = sc.class_of(index[&insert_stars(s, &pattern).unwrap()]);
                assert_eq!(*image.entry(pc.class_of(i)).or_insert(target), target, "{pattern}");
            }
        }
    }
}

/// Inside a class, covers are exactly the single upward rewriting steps of
/// inversion words, at the position of the transposed value.
#[test]
fn covers_inside_classes_are_rewriting_steps() {
    for n in 1..=5 {
        for pattern in patterns(n) {
            let p = weak_bruhat(&pattern).unwrap();
            let c = classify(&p).unwrap();
            let mut in_class: Vec<BTreeSet<String>> = vec![BTreeSet::new(); p.len()];
            for (e, &(a, b)) in p.covers().iter().enumerate() {
                if c.class_of(a) != c.class_of(b) {
                    continue;
                }
                let i = p.cover_label(e).unwrap();
                let (wa, wb) = (p.elements()[a].inversion_word(), p.elements()[b].inversion_word());
                assert_eq!(wa.apply_rule_up(2, i - 1).unwrap(), wb);
                in_class[a].insert(wb.to_string());
            }
            for (a, s) in p.elements().iter().enumerate() {
                let w = s.inversion_word();
                let steps: BTreeSet<String> = w
                    .up_positions()
                    .map(|pos| w.apply_rule_up(2, pos).unwrap().to_string())
                    .collect();
                assert_eq!(steps, in_class[a], "{s}");
            }
        }
    }
}

#[test]
fn quotients_are_lattices() {
    for n in 0..=6 {
        let p = weak_bruhat(&BlockPattern::plain(n)).unwrap();
        let q = quotient(&p, &classify(&p).unwrap()).unwrap();
        assert_eq!(q.len(), fuss_catalan(2, n));
        assert!(q.is_lattice().is_lattice(), "n={n}");
    }
}

#[test]
fn products_over_patterns() {
    for n in 0..=5 {
        for pattern in patterns(n) {
            assert!(product_check(&pattern).unwrap(), "{pattern}");
        }
    }
}

/// The congruence generated by collapsing forest-preserving edges has the
/// forest shapes as classes on small symmetric groups.
#[test]
fn collapsed_edges_match_forest_shapes() {
    for n in [3, 4] {
        let p = weak_bruhat(&BlockPattern::plain(n)).unwrap();
        let c = classify(&p).unwrap();
        for a in permutations(n) {
            for b in permutations(n) {
                let same_shape = LinearizedForest::tau(&a).unwrap().shape() == LinearizedForest::tau(&b).unwrap().shape();
                assert_eq!(same_shape, c.class_of(index_of(&p, &a)) == c.class_of(index_of(&p, &b)));
            }
        }
    }
}

#[test]
fn endpoints_of_starred_sequences() {
    for p in permutations(5) {
        for s in with_stars(&p, 1) {
            let top = class_top(&s).unwrap();
            let bottom = class_bottom(&s).unwrap();
            let w = s.inversion_word();
            assert_eq!(top.inversion_word(), w.top_normal_form(2).unwrap());
            assert_eq!(bottom.inversion_word(), w.bottom_normal_form(2).unwrap());
        }
    }
}

#[test]
fn json_dump() {
    let p = weak_bruhat(&BlockPattern::plain(3)).unwrap();
    let c = classify(&p).unwrap();
    let json = p.to_json(Some(&c));
    assert_eq!(json["elements"].as_array().unwrap().len(), 6);
    assert_eq!(json["covers"].as_array().unwrap().len(), 6);
    assert_eq!(json["classes"].as_array().unwrap().len(), 6);
}
