use cdyn::format::{parse, print, record, to_json};
use cdyn::generate::Generator;

#[test]
fn thousand_generated_documents() {
    for seed in 0..1000 {
        let doc = Generator::new(seed).document();
        let text = print(&doc);
        let back = parse(&text).unwrap_or_else(|e| panic!("seed {seed}: {e}\n{text}"));
        assert_eq!(back, doc, "seed {seed}");
        assert_eq!(print(&back), text, "seed {seed}");
        // The header is optional and comments are ignored.
        let bare = format!("# seed {seed}\n{}\n", record(&doc));
        assert_eq!(parse(&bare).unwrap(), doc, "seed {seed}");
        assert_eq!(to_json(&back), to_json(&doc));
    }
}

#[test]
fn generator_is_deterministic() {
    for seed in [0, 1, 99, u64::MAX] {
        assert_eq!(Generator::new(seed).document(), Generator::new(seed).document());
    }
}

#[test]
fn generated_kinds_cover_every_record_but_castles() {
    let mut kinds = std::collections::BTreeSet::new();
    for seed in 0..1000 {
        let doc = Generator::new(seed).document();
        kinds.insert(record(&doc).split_whitespace().next().unwrap().to_string());
    }
    let want = ["certificate", "clopen", "homeo", "measure", "neighborhood", "signature"];
    assert_eq!(kinds.into_iter().collect::<Vec<_>>(), want);
}

#[test]
fn non_canonical_input_is_rejected() {
    for text in [
        "clopen dyadic {1,0}",
        "clopen dyadic {0,01}",
        "clopen dyadic {00,01}",
        "homeo tree-pair dyadic {1->0,0->1}",
        "homeo tree-pair dyadic {00->00,01->01,1->1}",
        "measure dyadic mix{1/2: uniform; 1/2: uniform}",
    ] {
        assert!(parse(text).is_err(), "{text}");
    }
}
