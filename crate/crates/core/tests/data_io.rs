use std::io::Cursor;

use momentum_fw::data_io::{
    parse_libsvm, parse_movielens, read_trace, sidecar_path, synthetic_low_rank, write_libsvm, write_movielens,
    write_trace, write_trace_csv,
};
use momentum_fw::error::DataError;
use momentum_fw::linalg::Seed;
use momentum_fw::sets::SetDescriptor;
use momentum_fw::solvers::{
    Algorithm, EsColumns, ProblemDescriptor, ScheduleKind, SolverTrace, StopReason, TraceMetadata, TraceRow,
};
use rand::Rng;

fn meta(diagnostics: bool, extras: &[&str]) -> TraceMetadata {
    TraceMetadata {
        algorithm: Algorithm::Afw,
        schedule: Some(ScheduleKind::AfwShifted),
        seed: Some(9),
        problem: ProblemDescriptor {
            objective: "quadratic(dim=3)".into(),
            constraint: Some(SetDescriptor::L2Ball { radius: 1.0 }),
        },
        diagnostics,
        extra_columns: extras.iter().map(|s| s.to_string()).collect(),
        stop_reason: Some(StopReason::MaxIters),
    }
}

fn random_trace(rows: usize) -> SolverTrace {
    let mut rng = Seed(4).rng();
    let mut t = SolverTrace::new(meta(true, &["grad_y_sq"]));
    for k in 0..rows {
        let mut f = || rng.random::<f64>() * 10f64.powi(rng.random_range(-300..300));
        t.rows.push(TraceRow {
            k,
            f_value: f(),
            fw_gap: if k % 7 == 0 { f64::NAN } else { f() },
            step_delta: 2.0 / (k as f64 + 3.0),
            wall_time_ns: k as u64 * 13,
            es: Some(EsColumns { phi_star: f(), xi: f(), lambda: f() }),
            extra: vec![if k % 5 == 0 { f64::NAN } else { -f() }],
        });
    }
    t
}

fn same_bits(a: f64, b: f64) -> bool {
    (a.is_nan() && b.is_nan()) || a.to_bits() == b.to_bits()
}

#[test]
fn trace_round_trip_is_bitwise() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("afw.csv");
    let trace = random_trace(1000);
    write_trace(&trace, &path).unwrap();
    assert!(sidecar_path(&path).exists());
    let back = read_trace(&path).unwrap();
    assert_eq!(back.meta, trace.meta);
    assert_eq!(back.rows.len(), 1000);
    for (a, b) in trace.rows.iter().zip(&back.rows) {
        assert_eq!(a.k, b.k);
        assert_eq!(a.wall_time_ns, b.wall_time_ns);
        let (ea, eb) = (a.es.unwrap(), b.es.unwrap());
        let pairs = [
            (a.f_value, b.f_value),
            (a.fw_gap, b.fw_gap),
            (a.step_delta, b.step_delta),
            (ea.phi_star, eb.phi_star),
            (ea.xi, eb.xi),
            (ea.lambda, eb.lambda),
            (a.extra[0], b.extra[0]),
        ];
        assert!(pairs.iter().all(|&(x, y)| same_bits(x, y)), "row {}", a.k);
    }
}

#[test]
fn csv_layout() {
    let mut t = SolverTrace::new(meta(false, &[]));
    for k in 0..3 {
        t.rows.push(TraceRow { k, f_value: 1.0, fw_gap: 0.5, step_delta: 0.0, wall_time_ns: 0, es: None, extra: vec![] });
    }
    let mut buf = Vec::new();
    write_trace_csv(&t, &mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert_eq!(lines[0], "k,f_value,fw_gap,step_delta,wall_time_ns");

    let mut buf = Vec::new();
    let mut d = random_trace(1);
    d.meta.extra_columns = vec!["grad_y_sq".into()];
    write_trace_csv(&d, &mut buf).unwrap();
    let header = String::from_utf8(buf).unwrap().lines().next().unwrap().to_string();
    assert_eq!(header, "k,f_value,fw_gap,step_delta,wall_time_ns,phi_star,xi,lambda,grad_y_sq");
}

#[test]
fn header_mismatch_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("t.csv");
    write_trace(&random_trace(3), &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap().replacen("phi_star", "phi", 1);
    std::fs::write(&path, text).unwrap();
    assert!(matches!(read_trace(&path), Err(DataError::SchemaMismatch(_))));
    assert!(matches!(read_trace(&dir.path().join("missing.csv")), Err(DataError::Io(_))));
}

#[test]
fn libsvm_round_trip() {
    let text = "1 1:0.5 3:-2\n0 2:1.25\n\n1 1:1e-3 2:7 3:0.125\n";
    let ds = parse_libsvm(Cursor::new(text), None).unwrap();
    assert_eq!((ds.n_samples(), ds.dim()), (3, 3));
    assert_eq!(ds.labels, vec![1.0, -1.0, 1.0]);
    let mut out = Vec::new();
    write_libsvm(&ds, &mut out).unwrap();
    let again = parse_libsvm(Cursor::new(out), Some(3)).unwrap();
    assert_eq!(again.labels, ds.labels);
    assert_eq!(again.features, ds.features);
}

#[test]
fn libsvm_rejects_bad_lines() {
    for bad in ["1 0:1\n", "1 2:1 1:1\n", "x 1:1\n", "1 1:abc\n", "1 5:1\n"] {
        assert!(
            matches!(parse_libsvm(Cursor::new(bad), Some(3)), Err(DataError::MalformedLine { line: 1, .. })),
            "{bad:?}"
        );
    }
    assert!(matches!(
        parse_libsvm(Cursor::new("1 1:1\n2 1:1\n3 1:1\n"), None),
        Err(DataError::NonBinaryLabels { .. })
    ));
}

#[test]
fn movielens_round_trip() {
    let text = "1\t1\t5\t881250949\n2\t3\t3\t891717742\n1\t1\t4\t0\n3\t2\t1\n";
    let ds = parse_movielens(Cursor::new(text), Some((1.0, 5.0))).unwrap();
    assert_eq!((ds.n_users, ds.n_items, ds.duplicates), (3, 3, 1));
    assert_eq!(ds.ratings.nnz(), 3);
    let mut out = Vec::new();
    write_movielens(&ds, &mut out).unwrap();
    let again = parse_movielens(Cursor::new(out), Some((1.0, 5.0))).unwrap();
    assert_eq!(again.ratings, ds.ratings);
    assert!(parse_movielens(Cursor::new("0\t1\t3\t0\n"), None).is_err());
    assert!(parse_movielens(Cursor::new("1\t1\t9\t0\n"), Some((1.0, 5.0))).is_err());
}

#[test]
fn synthetic_instance_properties() {
    let inst = synthetic_low_rank(20, 15, 2, 0.25, Seed(1)).unwrap();
    assert_eq!(inst.observed.nnz(), 75);
    let fro: f64 = inst.full.iter().map(|x| x * x).sum::<f64>().sqrt();
    assert!((fro - 1.0).abs() < 1e-12);
    let sv = nalgebra::DMatrix::from_row_slice(20, 15, &inst.full).singular_values();
    assert!((sv.sum() - inst.nuclear_norm).abs() < 1e-12);
    assert_eq!(sv.iter().filter(|s| **s > 1e-10).count(), 2);
    let again = synthetic_low_rank(20, 15, 2, 0.25, Seed(1)).unwrap();
    assert_eq!(again.full, inst.full);
}
