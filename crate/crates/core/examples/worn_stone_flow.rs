//! Self-similar shrinking solution of the torsion worn-stone flow with
//! weight 1/8 on 64 pairs: a disc shrinking like (1 - t)^{1/4}.

use logmink::flow::{build_self_similar, verify_self_similar, FlowSpec};
use logmink::report::frames_csv;
use logmink::{FunctionalDescriptor, SolveOptions};

fn main() -> logmink::Result<()> {
    let spec = FlowSpec::from_density(
        FunctionalDescriptor::torsion(),
        1.0,
        |_| 1.0 / 8.0,
        64,
        FlowSpec::uniform_times(1.0, 16),
    )?;
    let flow = build_self_similar(&spec, &SolveOptions::default())?;
    print!("{}", frames_csv(&flow.frames));
    let report = verify_self_similar(&flow, &spec)?;
    println!(
        "measure residual {:.2e}, worst F(frame) error {:.2e}, passed {}",
        report.measure_residual,
        report.max_value_error(),
        report.passed
    );
    Ok(())
}
