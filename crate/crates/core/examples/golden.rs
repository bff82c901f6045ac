//! Regenerates `golden/regular.txt` on stdout.
//!
//! cargo run --release -p hytet --example golden > crates/core/golden/regular.txt

use hytet::oracle::{oracle_report_from_lengths, GoldenRecord, GoldenShape, QuadratureSpec};

fn main() {
    let spec = QuadratureSpec::with_rel_tol(1e-12);
    let shapes = [
        GoldenShape::Regular(0.5),
        GoldenShape::Regular(1.0),
        GoldenShape::Regular(2.0),
        GoldenShape::Lengths([0.9, 1.2, 1.0, 1.1, 0.8, 1.3]),
    ];
    println!("# Klein-model quadrature volumes.");
    println!("# rule: degree-5 Grundmann-Moller, global adaptive longest-edge bisection");
    println!("# max_subdivisions: {}", spec.max_subdivisions);
    println!("# fields: rho_or_lengths  volume  rel_tol  cells");
    for shape in shapes {
        let l = shape.lengths().expect("valid lengths");
        let report = oracle_report_from_lengths(&l, &spec).expect("oracle converges");
        let record = GoldenRecord {
            shape,
            volume: report.value,
            rel_tol: spec.rel_tol,
            cells: report.cells,
        };
        println!("{record}");
    }
}
