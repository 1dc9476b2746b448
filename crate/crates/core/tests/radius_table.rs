use std::collections::BTreeMap;

use sparsecode::experiment::{radius_table, RadiusCell};
use sparsecode::radius::{hits_all_aps, min_ap_hitting_number, upper_bound_e, upper_bound_e_simple, worst_case_vector};

/// Published values for `k = 3..=13`, from `E = 0`.
const TABLE: [&[usize]; 11] = [
    &[3, 6, 7, 8, 10, 12, 15, 16, 17, 18, 19, 21, 22, 23, 25, 27],
    &[4, 7, 11, 12, 14, 16, 18, 20, 22, 24, 26, 29, 31, 32, 35, 36],
    &[5, 10, 15, 20, 21, 22, 23, 26, 30, 32, 35, 40, 45, 46, 47, 48],
    &[6, 11, 16, 21, 27, 28, 30, 31, 34, 38, 42, 43, 47, 52],
    &[7, 14, 21, 28, 35, 42, 43, 44, 45, 47, 49, 54, 58],
    &[8, 15, 22, 29, 36, 43, 51, 52, 53, 55, 57, 60],
    &[9, 18, 25, 32, 39, 46, 53, 58, 59, 62, 66, 72],
    &[10, 19, 29, 34, 41, 48, 55, 62, 65, 69, 74],
    &[11, 22, 33, 44, 55, 66, 77, 88, 99, 110, 111, 112],
    &[12, 23, 34, 45, 56, 67, 78, 89, 100, 111, 123, 124],
    &[13, 26, 39, 52, 65, 78, 91, 104, 117, 130, 143, 156],
];

fn computed() -> BTreeMap<(usize, usize), usize> {
    let mut out = BTreeMap::new();
    for (i, row) in TABLE.iter().enumerate() {
        for cell in radius_table(&[i + 3], row.len() - 1, None).unwrap() {
            let RadiusCell::Solved(r) = cell else {
                panic!("no budget was set");
            };
            out.insert((r.k, r.errors), r.n);
        }
    }
    out
}

#[test]
fn whole_published_table() {
    let got = computed();
    for (i, row) in TABLE.iter().enumerate() {
        for (e, &n) in row.iter().enumerate() {
            assert_eq!(got[&(i + 3, e)], n, "k={} E={e}", i + 3);
        }
    }
}

#[test]
fn strictly_increasing_and_bounded() {
    let got = computed();
    for (&(k, e), &n) in &got {
        assert!(n <= k * (e + 1), "k={k} E={e}");
        if let Some(&next) = got.get(&(k, e + 1)) {
            assert!(next > n, "E step at k={k} E={e}");
        }
        if let Some(&next) = got.get(&(k + 1, e)) {
            assert!(next > n, "k step at k={k} E={e}");
        }
    }
}

#[test]
fn prime_window_lower_bound() {
    // (k+1)/2 (E+1) + 1 <= n_{k,E} whenever 1 <= E < (k+1)/2
    let got = computed();
    let mut strict = 0;
    let mut checked = 0;
    for (&(k, e), &n) in &got {
        if e >= 1 && 2 * e < k + 1 {
            assert!((k + 1) * (e + 1) + 2 <= 2 * n, "k={k} E={e} n={n}");
            checked += 1;
            strict += usize::from((k + 1) * (e + 1) + 2 < 2 * n);
        }
    }
    assert!(checked > 30);
    assert!(strict > 0);
    // at E = 0 the bound equals n_{3,0} = 3
    assert_eq!(got[&(3, 0)], 3);
}

#[test]
fn upper_bound_at_constructed_lengths() {
    for (k, level) in [(3usize, 2u32), (3, 3), (5, 2), (7, 2)] {
        let w = worst_case_vector(k, level).unwrap();
        assert!(hits_all_aps(&w.support(), w.n, k));
        let h = min_ap_hitting_number(w.n, k).unwrap();
        assert!(h <= w.errors, "k={k} level={level}");
        let bound = upper_bound_e(k, w.n).unwrap();
        assert!((h as f64) - 1.0 <= bound, "k={k} n={} h={h} bound={bound}", w.n);
        assert!(bound <= upper_bound_e_simple(k, w.n).unwrap());
    }
}
