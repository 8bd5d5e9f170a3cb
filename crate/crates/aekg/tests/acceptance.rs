//! Acceptance suite: one test per criterion, each printing a `[PASS]`
//! line (run with `--nocapture` to see them). Criteria cover filter
//! correctness, JSON round-trips, graph merge semantics, the shared-
//! symptom reproduction, ontology triple-count oracles, schema fidelity,
//! serialization round-trips, the domain/range audit, Cypher escaping,
//! and an end-to-end scale check with time and memory bounds.
//!
//! Expected values come from independent oracles implemented in this file
//! (normalization, IRI encoding, and count enumeration are reimplemented
//! here, not imported from the library).

use aekg::faers::{
    filter_reports, parse_faers_xml, read_canonical_json, write_canonical_json, CanonicalBatch,
};
use aekg::graph::{build_faers_graph, build_vaers_graph, emit_cypher_script, graph_stats, NodeKey};
use aekg::model::{DrugRecord, PatientRecord, ReactionRecord, SafetyReport, VocabularySet};
use aekg::ontology::{
    audit_domain_range, build_ontology, default_restrictions, EntityKind, OntologyConfig,
    PropertyKind, Quantifier,
};
use aekg::rdf::{parse_turtle, vocab, Iri, Literal, Term, TripleGraph};
use aekg::vaers::{parse_vaers_files, VaersColumns};
use std::collections::BTreeSet;
use std::io::Write as _;
use std::time::{Duration, Instant};

// Deterministic splitmix64; every criterion runs on a fixed seed.
struct Rng(u64);

impl Rng {
    fn next(&mut self) -> u64 {
        self.0 = self.0.wrapping_add(0x9E3779B97F4A7C15);
        let mut z = self.0;
        z = (z ^ (z >> 30)).wrapping_mul(0xBF58476D1CE4E5B9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94D049BB133111EB);
        z ^ (z >> 31)
    }

    fn below(&mut self, n: usize) -> usize {
        (self.next() % n as u64) as usize
    }

    fn chance(&mut self, percent: u64) -> bool {
        self.next() % 100 < percent
    }
}

const DRUG_POOL: &[&str] = &[
    "Aspirin",
    " ASPIRIN ",
    "aspirin",
    "Warfarin  Sodium",
    "O'Brien's 5\" Tonic",
    "Ibuprofen\\Forte",
    "Прэпарат",
    "acétaminophène",
];

const REACTION_POOL: &[&str] = &[
    "Nausea",
    "HEADACHE",
    "headache",
    "GI  Bleed",
    "Rash \"severe\"",
    "反応",
];

const SUBSTANCE_POOL: &[&str] = &[
    "ACETYLSALICYLIC ACID",
    "WARFARIN SODIUM",
    "IBUPROFEN",
    "Substância ativa",
];

fn synth_report(rng: &mut Rng, ordinal: usize) -> SafetyReport {
    let drugs: Vec<DrugRecord> = (0..rng.below(4))
        .map(|_| DrugRecord {
            medicinal_product: DRUG_POOL[rng.below(DRUG_POOL.len())].to_string(),
            characterization: rng.chance(50).then(|| format!("{}", 1 + rng.below(3))),
            active_substances: (0..rng.below(3))
                .map(|_| SUBSTANCE_POOL[rng.below(SUBSTANCE_POOL.len())].to_string())
                .collect(),
        })
        .collect();
    let reactions: Vec<ReactionRecord> = (0..rng.below(3))
        .map(|_| ReactionRecord {
            term: REACTION_POOL[rng.below(REACTION_POOL.len())].to_string(),
        })
        .collect();
    SafetyReport {
        report_id: if rng.chance(92) {
            format!("R{ordinal}")
        } else {
            String::new()
        },
        receive_date: rng
            .chance(70)
            .then(|| format!("2023{:02}{:02}", 1 + rng.below(12), 1 + rng.below(28))),
        serious: rng.chance(40).then(|| "1".to_string()),
        patient: PatientRecord {
            onset_age: rng.chance(50).then(|| format!("{}", rng.below(100))),
            onset_age_unit: rng.chance(30).then(|| "801".to_string()),
            age_group: rng.chance(50).then(|| format!("{}", 1 + rng.below(6))),
            sex: rng.chance(60).then(|| format!("{}", 1 + rng.below(2))),
            drugs,
            reactions,
        },
    }
}

fn synth_batch(rng: &mut Rng, n: usize) -> CanonicalBatch {
    let reports: Vec<SafetyReport> = (0..n).map(|i| synth_report(rng, i)).collect();
    filter_reports("synthetic", reports)
}

fn passed(line: &str) {
    println!("[PASS] {line}");
}

#[test]
fn ac01_filter_correctness_on_1000_reports() {
    let start = Instant::now();
    let mut rng = Rng(0xAC01);
    let reports: Vec<SafetyReport> = (0..1000).map(|i| synth_report(&mut rng, i)).collect();
    let batch = filter_reports("ac1", reports);
    assert_eq!(
        batch.reports.len() + batch.drop_log.len(),
        1000,
        "kept + dropped must equal 1000"
    );
    for report in &batch.reports {
        assert!(
            !report.patient.drugs.is_empty(),
            "kept report without drugs"
        );
        assert!(
            !report.patient.reactions.is_empty(),
            "kept report without reactions"
        );
    }
    assert!(
        !batch.reports.is_empty() && !batch.drop_log.is_empty(),
        "generator covers both outcomes"
    );
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(5), "took {elapsed:?}");
    passed(&format!(
        "AC1 filter correctness: 1000 reports -> kept={} dropped={} in {elapsed:?}",
        batch.reports.len(),
        batch.drop_log.len()
    ));
}

#[test]
fn ac02_json_roundtrip_over_200_batches() {
    let start = Instant::now();
    let mut rng = Rng(0xAC02);
    for _ in 0..200 {
        let n = rng.below(12);
        let batch = synth_batch(&mut rng, n);
        let mut first = Vec::new();
        write_canonical_json(&batch, &mut first).expect("write");
        let back = read_canonical_json(first.as_slice()).expect("read back");
        assert_eq!(back, batch, "read(write(batch)) != batch");
        let mut second = Vec::new();
        write_canonical_json(&batch, &mut second).expect("write again");
        assert_eq!(first, second, "write is not byte-deterministic");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    passed(&format!(
        "AC2 JSON round-trip: 200 batches, byte-deterministic, in {elapsed:?}"
    ));
}

#[test]
fn ac03_graph_idempotence_and_drug_dedup() {
    let start = Instant::now();
    let mut rng = Rng(0xAC03);
    let vocab = VocabularySet::builtin();
    for _ in 0..100 {
        let n = rng.below(15);
        let batch = synth_batch(&mut rng, n);
        let (once, _) = build_faers_graph(&batch, &vocab);

        let mut doubled = batch.clone();
        doubled.reports.extend(batch.reports.iter().cloned());
        let (twice, _) = build_faers_graph(&doubled, &vocab);
        assert_eq!(once, twice, "ingesting a batch twice changed the graph");

        // Independent oracle: distinct normalized drug names computed
        // directly over the raw batch.
        let distinct: BTreeSet<String> = batch
            .reports
            .iter()
            .flat_map(|r| r.patient.drugs.iter())
            .map(|d| oracle_normalize(&d.medicinal_product))
            .collect();
        let stats = graph_stats(&once, 3);
        assert_eq!(
            stats.node_counts.get("Drug").copied().unwrap_or(0),
            distinct.len(),
            "Drug node count != distinct normalized names"
        );
        assert!(once.audit().is_empty(), "referential integrity violated");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(10), "took {elapsed:?}");
    passed(&format!(
        "AC3 graph idempotence + dedup: 100 batches in {elapsed:?}"
    ));
}

#[test]
fn ac04_two_patients_sharing_a_symptom() {
    let data = "VAERS_ID,STATE\nA,KS\nB,MO\n";
    let symptoms =
        "VAERS_ID,SYMPTOM1,SYMPTOM2,SYMPTOM3,SYMPTOM4,SYMPTOM5\nA,Headache,,,,\nB,Headache,,,,\n";
    let vaccines = "VAERS_ID,VAX_TYPE\nA,FLU\nB,FLU\n";
    let join = parse_vaers_files(
        data.as_bytes(),
        symptoms.as_bytes(),
        vaccines.as_bytes(),
        &VaersColumns::default(),
    )
    .expect("fixture parses");
    let graph = build_vaers_graph(&join.cases);
    let stats = graph_stats(&graph, 10);
    assert_eq!(
        stats.node_counts.get("Symptom"),
        Some(&1),
        "exactly one Symptom node"
    );
    assert_eq!(
        graph.degree(&NodeKey::new("Symptom", "HEADACHE")),
        2,
        "shared symptom degree"
    );
    passed("AC4 shared-symptom reproduction: one Symptom node of degree 2");
}

fn two_drug_fixture() -> CanonicalBatch {
    filter_reports(
        "fixture",
        vec![SafetyReport {
            report_id: "R1".into(),
            patient: PatientRecord {
                drugs: vec![
                    DrugRecord {
                        medicinal_product: "ASPIRIN".into(),
                        active_substances: vec!["ACETYLSALICYLIC ACID".into()],
                        ..Default::default()
                    },
                    DrugRecord {
                        medicinal_product: "WARFARIN".into(),
                        active_substances: vec!["WARFARIN SODIUM".into()],
                        ..Default::default()
                    },
                ],
                reactions: vec![ReactionRecord {
                    term: "GI BLEED".into(),
                }],
                ..Default::default()
            },
            ..Default::default()
        }],
    )
}

#[test]
fn ac05_ontology_triple_count_oracles() {
    let config = OntologyConfig::default();
    let empty = build_ontology(&filter_reports("e", vec![]), &config).expect("build");
    assert_eq!(empty.len(), 40, "empty batch must yield exactly 40 triples");

    let fixture = build_ontology(&two_drug_fixture(), &config).expect("build");
    assert_eq!(
        fixture.len(),
        53,
        "1-report/2-drug/1-reaction fixture must yield 53 triples"
    );

    let mut rng = Rng(0xAC05);
    for _ in 0..100 {
        let n = rng.below(10);
        let batch = synth_batch(&mut rng, n);
        let graph = build_ontology(&batch, &config).expect("build");
        let expected = 40 + oracle_instance_triples(&batch);
        assert_eq!(graph.len(), expected, "closed-form count mismatch");
    }
    passed("AC5 ontology counts: empty=40, fixture=53, closed-form holds on 100 random batches");
}

#[test]
fn ac06_schema_fidelity() {
    let config = OntologyConfig::default();
    let graph = build_ontology(&filter_reports("e", vec![]), &config).expect("build");

    let has_patient: Term = config.property_iri(PropertyKind::HasPatient).into();
    assert!(
        graph.has(
            &has_patient,
            vocab::RDFS_DOMAIN,
            &config.class_iri(EntityKind::SafetyReport).into()
        ),
        "has_patient rdfs:domain SafetyReport"
    );
    assert!(
        graph.has(
            &has_patient,
            vocab::RDFS_RANGE,
            &config.class_iri(EntityKind::Patient).into()
        ),
        "has_patient rdfs:range Patient"
    );
    let dtp: Term = config.property_iri(PropertyKind::HasActiveSubstance).into();
    assert!(
        graph.has(
            &dtp,
            vocab::RDF_TYPE,
            &Term::Iri(Iri::new(vocab::OWL_DATATYPE_PROPERTY).unwrap())
        ),
        "has_activesubstance typed owl:DatatypeProperty"
    );

    // Every default restriction must appear as the full four-triple
    // pattern rooted at some blank node.
    for spec in default_restrictions() {
        let quantifier_iri = match spec.quantifier {
            Quantifier::AllValuesFrom => vocab::OWL_ALL_VALUES_FROM,
            Quantifier::SomeValuesFrom => vocab::OWL_SOME_VALUES_FROM,
        };
        let found = graph
            .triples()
            .filter_map(|t| match (&t.subject, &t.object) {
                (Term::Blank(b), o)
                    if matches!(&t.predicate, Term::Iri(p) if p.as_str() == vocab::OWL_ON_PROPERTY)
                        && *o == Term::Iri(config.property_iri(spec.property)) =>
                {
                    Some(Term::Blank(b.clone()))
                }
                _ => None,
            })
            .any(|b| {
                graph.has(
                    &b,
                    vocab::RDF_TYPE,
                    &Term::Iri(Iri::new(vocab::OWL_RESTRICTION).unwrap()),
                ) && graph.has(&b, quantifier_iri, &config.class_iri(spec.filler).into())
                    && graph.has(
                        &config.class_iri(spec.on_class).into(),
                        vocab::RDFS_SUBCLASSOF,
                        &b,
                    )
            });
        assert!(found, "missing restriction pattern for {:?}", spec.property);
    }
    passed(
        "AC6 schema fidelity: verbatim axioms and all four 4-triple restriction patterns present",
    );
}

#[test]
fn ac07_serialization_roundtrip_over_200_graphs() {
    let start = Instant::now();
    let mut rng = Rng(0xAC07);
    for _ in 0..200 {
        let graph = synth_triple_graph(&mut rng);
        let mut ttl = Vec::new();
        graph.serialize_turtle(&mut ttl).expect("turtle");
        let parsed = parse_turtle(std::str::from_utf8(&ttl).expect("utf-8")).expect("parse back");
        assert!(
            parsed.isomorphic(&graph),
            "turtle round-trip lost structure"
        );

        let mut xml = Vec::new();
        graph.serialize_rdfxml(&mut xml).expect("rdfxml");
        assert!(xml_is_well_formed(&xml), "RDF/XML output not well-formed");
    }
    let elapsed = start.elapsed();
    assert!(elapsed < Duration::from_secs(15), "took {elapsed:?}");
    passed(&format!(
        "AC7 serialization round-trip: 200 graphs in {elapsed:?}"
    ));
}

#[test]
fn ac08_domain_range_audit_is_clean() {
    let config = OntologyConfig::default();
    let mut rng = Rng(0xAC08);
    for _ in 0..50 {
        let n = rng.below(10);
        let batch = synth_batch(&mut rng, n);
        let graph = build_ontology(&batch, &config).expect("build");
        let violations = audit_domain_range(&graph, &config);
        assert!(
            violations.is_empty(),
            "domain/range violations: {violations:?}"
        );
    }
    passed("AC8 domain/range audit: zero violations over 50 generated ontologies");
}

#[test]
fn ac09_cypher_escaping_and_statement_counts() {
    let vocab_set = VocabularySet::builtin();
    let nasty = filter_reports(
        "nasty",
        vec![SafetyReport {
            report_id: "R\"1\\".into(),
            patient: PatientRecord {
                drugs: vec![DrugRecord {
                    medicinal_product: "O'Brien's 5\" \\ \"Tonic\"".into(),
                    active_substances: vec!["акті́вна речовина".into()],
                    ..Default::default()
                }],
                reactions: vec![ReactionRecord {
                    term: "naïve 反応 \"quoted\"".into(),
                }],
                ..Default::default()
            },
            ..Default::default()
        }],
    );
    let mut script = Vec::new();
    let statements = emit_cypher_script(&nasty, &vocab_set, &mut script).expect("emit");
    let text = String::from_utf8(script).expect("UTF-8 script");
    assert_eq!(statements, 1, "one UNWIND statement per non-empty batch");
    scan_cypher_string_literals(&text).expect("string literals balanced and escaped");
    for clause in [
        "MERGE (r:SafetyReport",
        "MERGE (p:Patient",
        "MERGE (d:Drug",
        "MERGE (e:AdverseEvent",
    ] {
        assert_eq!(
            text.matches(clause).count(),
            1,
            "node-merge clause {clause}"
        );
    }

    let empty = filter_reports("empty", vec![]);
    let mut empty_script = Vec::new();
    let empty_statements = emit_cypher_script(&empty, &vocab_set, &mut empty_script).expect("emit");
    assert_eq!(empty_statements, 0);
    scan_cypher_string_literals(&String::from_utf8(empty_script).unwrap()).expect("header scans");
    passed(
        "AC9 cypher sanity: escaping scanner clean, statement and clause counts match the oracle",
    );
}

#[test]
fn ac10_scale_10k_reports_within_bounds() {
    let start = Instant::now();
    let dir = tempfile::tempdir().expect("tempdir");

    // Sample resident memory during the run: this kernel has no VmHWM,
    // so track the max of VmRSS at 10ms resolution.
    let stop = std::sync::Arc::new(std::sync::atomic::AtomicBool::new(false));
    let peak_seen = std::sync::Arc::new(std::sync::atomic::AtomicU64::new(0));
    let sampler = {
        let stop = stop.clone();
        let peak_seen = peak_seen.clone();
        std::thread::spawn(move || {
            while !stop.load(std::sync::atomic::Ordering::Relaxed) {
                if let Some(rss) = current_rss_bytes() {
                    peak_seen.fetch_max(rss, std::sync::atomic::Ordering::Relaxed);
                }
                std::thread::sleep(Duration::from_millis(10));
            }
        })
    };

    // Generate a 10,000-report XML document.
    let mut rng = Rng(0xAC10);
    let mut xml = String::with_capacity(16 << 20);
    xml.push_str("<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<ichicsr>\n");
    for i in 0..10_000 {
        let drug = DRUG_POOL[rng.below(DRUG_POOL.len() - 1)]
            .replace(['<', '>', '&', '\\', '"', '\''], " ");
        let reaction =
            REACTION_POOL[rng.below(REACTION_POOL.len())].replace(['<', '>', '&', '"'], " ");
        xml.push_str(&format!(
            "<safetyreport><safetyreportid>R{i}</safetyreportid><receivedate>20230101</receivedate><patient><patientagegroup>{}</patientagegroup><drug><medicinalproduct>{drug}</medicinalproduct><activesubstance><activesubstancename>S{}</activesubstancename></activesubstance></drug><reaction><reactionmeddrapt>{reaction}</reactionmeddrapt></reaction></patient></safetyreport>\n",
            1 + rng.below(6),
            rng.below(50),
        ));
    }
    xml.push_str("</ichicsr>\n");

    // convert: streaming parse, filter, write canonical JSON.
    let reports = parse_faers_xml(xml.as_bytes()).expect("parse");
    assert_eq!(reports.len(), 10_000);
    let batch = filter_reports("scale", reports);
    assert_eq!(batch.reports.len(), 10_000);
    let json_path = dir.path().join("scale.json");
    let mut json_file = std::io::BufWriter::new(std::fs::File::create(&json_path).expect("create"));
    write_canonical_json(&batch, &mut json_file).expect("write json");
    json_file.flush().expect("flush");

    // cypher from the JSON on disk.
    let reread = read_canonical_json(std::io::BufReader::new(
        std::fs::File::open(&json_path).expect("open"),
    ))
    .expect("reread");
    let mut cypher = std::io::BufWriter::new(
        std::fs::File::create(dir.path().join("scale.cypher")).expect("create"),
    );
    emit_cypher_script(&reread, &VocabularySet::builtin(), &mut cypher).expect("cypher");
    cypher.flush().expect("flush");

    // owl from the same batch.
    let graph = build_ontology(&reread, &OntologyConfig::default()).expect("build");
    let mut ttl = std::io::BufWriter::new(
        std::fs::File::create(dir.path().join("scale.ttl")).expect("create"),
    );
    graph.serialize_turtle(&mut ttl).expect("ttl");
    ttl.flush().expect("flush");

    let elapsed = start.elapsed();
    stop.store(true, std::sync::atomic::Ordering::Relaxed);
    sampler.join().expect("sampler thread");
    assert!(
        elapsed < Duration::from_secs(60),
        "pipeline took {elapsed:?}"
    );
    let peak = match vm_hwm_bytes() {
        Some(exact) => exact,
        None => peak_seen
            .load(std::sync::atomic::Ordering::Relaxed)
            .max(current_rss_bytes().unwrap_or(0)),
    };
    assert!(peak > 0, "memory measurement unavailable");
    assert!(
        peak < 1 << 30,
        "peak memory {} MiB exceeds 1 GiB",
        peak >> 20
    );
    passed(&format!(
        "AC10 scale: 10k reports convert->cypher->owl ({} triples) in {elapsed:?}, peak memory {} MiB",
        graph.len(),
        peak >> 20,
    ));
}

fn status_field_bytes(field: &str) -> Option<u64> {
    let status = std::fs::read_to_string("/proc/self/status").ok()?;
    let line = status.lines().find(|l| l.starts_with(field))?;
    let kb: u64 = line.split_whitespace().nth(1)?.parse().ok()?;
    Some(kb * 1024)
}

fn vm_hwm_bytes() -> Option<u64> {
    status_field_bytes("VmHWM:")
}

fn current_rss_bytes() -> Option<u64> {
    status_field_bytes("VmRSS:")
}

fn xml_is_well_formed(bytes: &[u8]) -> bool {
    let mut reader = quick_xml::Reader::from_reader(bytes);
    let mut buf = Vec::new();
    loop {
        match reader.read_event_into(&mut buf) {
            Ok(quick_xml::events::Event::Eof) => return true,
            Ok(_) => buf.clear(),
            Err(_) => return false,
        }
    }
}

// Independent Cypher string-literal scanner (the escaping oracle).
fn scan_cypher_string_literals(script: &str) -> Result<usize, String> {
    let mut chars = script.chars();
    let mut literals = 0;
    while let Some(c) = chars.next() {
        if c != '"' {
            continue;
        }
        literals += 1;
        loop {
            match chars.next() {
                None => return Err("unterminated string literal".into()),
                Some('"') => break,
                Some('\\') => match chars.next() {
                    Some('\\' | '"' | '\'' | 'n' | 'r' | 't' | 'b' | 'f') => {}
                    Some('u') => {
                        for _ in 0..4 {
                            match chars.next() {
                                Some(h) if h.is_ascii_hexdigit() => {}
                                _ => return Err("bad unicode escape".into()),
                            }
                        }
                    }
                    other => return Err(format!("bad escape {other:?}")),
                },
                Some('\n') => return Err("raw newline inside string literal".into()),
                Some(_) => {}
            }
        }
    }
    Ok(literals)
}

// Independent normalization/minting/count oracles.

fn oracle_normalize(s: &str) -> String {
    s.split_whitespace()
        .collect::<Vec<_>>()
        .join(" ")
        .to_uppercase()
}

fn oracle_encode(s: &str) -> String {
    let mut out = String::new();
    for c in s.chars() {
        if c.is_ascii_alphanumeric() || c == '_' || c == '-' {
            out.push(c);
        } else {
            let mut buf = [0u8; 4];
            for b in c.encode_utf8(&mut buf).bytes() {
                out.push_str(&format!("%{b:02X}"));
            }
        }
    }
    out
}

fn oracle_instance_triples(batch: &CanonicalBatch) -> usize {
    let mut triples: BTreeSet<String> = BTreeSet::new();
    for report in &batch.reports {
        let sr = format!("SafetyReport_{}", oracle_encode(&report.report_id));
        let patient = format!("Patient_{}", oracle_encode(&report.report_id));
        triples.insert(format!("{sr}|type|SafetyReport"));
        triples.insert(format!("{patient}|type|Patient"));
        triples.insert(format!("{sr}|has_patient|{patient}"));
        let mut drugs = Vec::new();
        for d in &report.patient.drugs {
            let key = format!(
                "Drug_{}",
                oracle_encode(&oracle_normalize(&d.medicinal_product))
            );
            triples.insert(format!("{key}|type|Drug"));
            triples.insert(format!("{patient}|took|{key}"));
            for s in &d.active_substances {
                let s = s.trim();
                if !s.is_empty() {
                    triples.insert(format!("{key}|has_activesubstance|{s:?}"));
                }
            }
            drugs.push(key);
        }
        for r in &report.patient.reactions {
            let event = format!("AdverseEvent_{}", oracle_encode(&oracle_normalize(&r.term)));
            triples.insert(format!("{event}|type|AdverseEvent"));
            triples.insert(format!("{patient}|has_reported|{event}"));
            for drug in &drugs {
                triples.insert(format!("{drug}|is_partOf_causing|{event}"));
            }
        }
    }
    triples.len()
}

// Random triple graphs in the emitted subset, for AC7.
fn synth_triple_graph(rng: &mut Rng) -> TripleGraph {
    let mut graph = TripleGraph::new();
    graph.bind_prefix("ex", "http://example.org/ns#").unwrap();
    let blanks: Vec<_> = (0..3).map(|_| graph.new_blank_node()).collect();
    let locals = ["alpha", "beta", "gamma_1", "p", "q_r"];
    let lexicals = [
        "plain",
        "with \"quotes\"",
        "back\\slash",
        "tab\there",
        "line\nbreak",
        "ünïcode 反応",
        "",
    ];
    for _ in 0..rng.below(20) {
        let subject: Term = if rng.chance(30) {
            blanks[rng.below(blanks.len())].clone().into()
        } else {
            Term::iri(&format!(
                "http://example.org/ns#{}",
                locals[rng.below(locals.len())]
            ))
            .unwrap()
        };
        let predicate = Term::iri(&format!(
            "http://example.org/ns#{}",
            locals[rng.below(locals.len())]
        ))
        .unwrap();
        let object: Term = match rng.below(4) {
            0 => blanks[rng.below(blanks.len())].clone().into(),
            1 => Term::iri(&format!(
                "http://example.org/ns#{}",
                locals[rng.below(locals.len())]
            ))
            .unwrap(),
            2 => Literal::plain(lexicals[rng.below(lexicals.len())]).into(),
            _ => Literal::typed(
                lexicals[rng.below(lexicals.len())],
                Iri::new(vocab::XSD_STRING).unwrap(),
            )
            .into(),
        };
        graph.add(subject, predicate, object).unwrap();
    }
    graph
}
