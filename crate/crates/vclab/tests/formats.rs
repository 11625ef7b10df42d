use proptest::prelude::*;
use serde_json::{json, Value};
use vclab::cert::{format_float, to_canonical_json};
use vclab::io::{
    graph_digest, parse_dimacs, parse_json_graph, read_coloring, write_coloring, write_dimacs, write_json_graph,
    ColoringFile,
};
use vclab_core::{Graph, SymMatrix};

fn graph() -> impl Strategy<Value = Graph> {
    (1usize..9).prop_flat_map(|n| {
        prop::collection::vec((0..n, 0..n), 0..20).prop_map(move |pairs| {
            Graph::new(n, pairs.into_iter().filter(|(i, j)| i != j)).unwrap()
        })
    })
}

fn json_value() -> impl Strategy<Value = Value> {
    let leaf = prop_oneof![
        Just(Value::Null),
        any::<bool>().prop_map(Value::Bool),
        any::<i32>().prop_map(|i| json!(i)),
        (-1e6f64..1e6).prop_map(|x| json!(x)),
        "[a-z ]{0,6}".prop_map(Value::String),
    ];
    leaf.prop_recursive(3, 24, 4, |inner| {
        prop_oneof![
            prop::collection::vec(inner.clone(), 0..4).prop_map(Value::Array),
            prop::collection::btree_map("[a-z]{1,4}", inner, 0..4)
                .prop_map(|m| Value::Object(m.into_iter().collect())),
        ]
    })
}

#[test]
fn float_format_examples() {
    assert_eq!(format_float(1.0), "1.000000000000e+00");
    assert_eq!(format_float(-2.5e-10), "-2.500000000000e-10");
    assert_eq!(format_float(1e100), "1.000000000000e+100");
    assert_eq!(format_float(0.0), "0.000000000000e+00");
    assert_eq!(format_float(f64::NAN), "null");
    assert_eq!(format_float(f64::INFINITY), "null");
}

#[test]
fn canonical_json_layout() {
    let v = json!({"b": [1.5, 2], "a": {"z": [[1, 2], [3, 4]], "y": "s"}});
    let expected = "{\n  \"a\": {\n    \"y\": \"s\",\n    \"z\": [\n      [1, 2],\n      [3, 4]\n    ]\n  },\n  \"b\": [1.500000000000e+00, 2]\n}";
    assert_eq!(to_canonical_json(&v), expected);
}

#[test]
fn dimacs_errors_carry_line_numbers() {
    for (text, line) in [
        ("e 1 2\n", 1),
        ("c hi\np edge 2 1\ne 1 3\n", 3),
        ("p edge 2 1\ne 1 1\n", 2),
        ("p edge x 1\n", 1),
    ] {
        let err = parse_dimacs(text).unwrap_err().to_string();
        assert!(err.contains(&format!("line {line}")), "{text:?}: {err}");
    }
}

proptest! {
    #[test]
    fn float_format_round_trips(x in any::<f64>().prop_filter("finite", |x| x.is_finite())) {
        let s = format_float(x);
        let (mant, exp) = s.split_once('e').unwrap();
        prop_assert_eq!(mant.trim_start_matches('-').split_once('.').unwrap().1.len(), 12);
        prop_assert!(exp.starts_with('+') || exp.starts_with('-'));
        prop_assert!(exp.len() >= 3);
        let back: f64 = s.parse().unwrap();
        prop_assert!((back - x).abs() <= 1e-12 * x.abs());
    }

    #[test]
    fn canonical_json_parses_back(v in json_value()) {
        let s = to_canonical_json(&v);
        let back: Value = serde_json::from_str(&s).unwrap();
        prop_assert_eq!(to_canonical_json(&back), s);
    }

    #[test]
    fn graph_formats_agree(g in graph()) {
        let a = parse_dimacs(&write_dimacs(&g)).unwrap();
        let b = parse_json_graph(&write_json_graph(&g)).unwrap();
        prop_assert_eq!(&a, &g);
        prop_assert_eq!(&b, &g);
        prop_assert_eq!(graph_digest(&a), graph_digest(&b));
    }

    #[test]
    fn coloring_file_round_trips(n in 1usize..6, seed in prop::collection::vec(-1.0f64..1.0, 36)) {
        let m = SymMatrix::from_fn(n, |i, j| seed[i.min(j) * 6 + i.max(j)]);
        let c = ColoringFile::from_gram(2.5, &m);
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        write_coloring(&path, &c).unwrap();
        let back = read_coloring(&path).unwrap();
        prop_assert_eq!(back.n, n);
        prop_assert!(back.to_gram().unwrap().sub(&m).max_abs() <= 1e-12);
    }
}
