use std::fs;
use std::path::{Path, PathBuf};

use qudit_pauli::circuit::{execute, parse, MeasureTarget, Op};
use qudit_pauli::{CVector, Encoding};

fn corpus(dir: &str) -> Vec<(PathBuf, String, usize)> {
    let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(dir);
    let mut files: Vec<PathBuf> = fs::read_dir(&root).unwrap().map(|e| e.unwrap().path()).collect();
    files.sort();
    files
        .into_iter()
        .map(|path| {
            let text = fs::read_to_string(&path).unwrap();
            let line = text
                .lines()
                .find_map(|l| l.trim().strip_prefix("# expect-line:"))
                .and_then(|n| n.trim().parse().ok())
                .unwrap_or_else(|| panic!("{} has no expect-line marker", path.display()));
            (path, text, line)
        })
        .collect()
}

#[test]
fn malformed_files_report_their_line() {
    let files = corpus("malformed");
    assert!(files.len() >= 10);
    for (path, text, line) in files {
        let err = parse(&text).expect_err(&path.display().to_string());
        assert_eq!(err.span.line, line, "{}: {err}", path.display());
        assert!(err.to_string().starts_with(&format!("line {line}, column ")), "{err}");
    }
}

#[test]
fn runtime_errors_report_their_line() {
    for (path, text, line) in corpus("runtime") {
        let circuit = parse(&text).unwrap();
        let err = execute(&circuit).expect_err(&path.display().to_string());
        assert_eq!(err.span.line, line, "{}: {err}", path.display());
        assert!(err.to_string().contains(&format!("line {line}")));
    }
}

#[test]
fn specific_messages() {
    assert!(parse("dims 3 3\nsum 0 0").unwrap_err().message.contains("sum requires distinct qudits"));
    assert!(parse("dims 3\nfoo 0").unwrap_err().message.contains("unknown keyword"));
    let err = parse("dims 3 3\nx 5").unwrap_err();
    assert!(err.message.contains("out of range"));
    assert_eq!(err.span.column, 3);
}

#[test]
fn powers_reduce_at_parse_time() {
    let c = parse("dims 2\nx 0 ^3").unwrap();
    assert_eq!(c.statements()[0].op, Op::X { qudit: 0, power: 1 });
    let c = parse("dims 5\nz 0 ^-1").unwrap();
    assert_eq!(c.statements()[0].op, Op::Z { qudit: 0, power: 4 });
}

#[test]
fn demo_circuit_shape() {
    let text = fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/circuits/sum_demo.qc")).unwrap();
    let c = parse(&text).unwrap();
    let ops: Vec<&Op> = c.ops().collect();
    assert_eq!(
        ops,
        vec![
            &Op::Prep { qudit: 0, label: 1 },
            &Op::Prep { qudit: 1, label: 1 },
            &Op::Swap { qudit: 1 },
            &Op::Sum { control: 0, target: 1 },
            &Op::Measure(MeasureTarget::All),
        ]
    );
}

#[test]
fn empty_program_reports_initial_state() {
    let report = execute(&parse("dims 2 3\n").unwrap()).unwrap();
    assert!(report.measurements.is_empty());
    assert_eq!(report.final_state.state.len(), 6);
    assert_eq!(report.final_state.state[0], [1.0, 0.0]);
    assert!(report.final_state.qudits.iter().all(|q| q.encoding == Encoding::Number));
}

#[test]
fn fourier_pair_is_identity() {
    let report = execute(&parse("dims 4 3\nprep 0 2\nf 0\nf 0 inv\n").unwrap()).unwrap();
    let got = CVector::new(report.final_state.state.iter().map(|[re, im]| num_complex::Complex64::new(*re, *im)).collect());
    assert!(got.max_diff(&CVector::basis(12, 2 * 3)) < 1e-12);
}

#[test]
fn sum_on_computed_labels() {
    // Every control/target label pair at d = 4 lands on target label c + t.
    for c in 0..4 {
        for t in 0..4 {
            let text = format!("dims 4 4\nprep 0 {c}\nprep 1 {t}\nswap 1\nsum 0 1\nswap 1\nmeasure 1\n");
            let report = execute(&parse(&text).unwrap()).unwrap();
            let p = &report.measurements[0].probabilities;
            assert!((p[(c + t) % 4] - 1.0).abs() < 1e-10, "c={c} t={t}: {p:?}");
        }
    }
}

#[test]
fn crlf_and_bom_accepted() {
    let c = parse("\u{feff}dims 2\r\nx 0\r\nmeasure all\r\n").unwrap();
    assert_eq!(c.statements().len(), 2);
}
