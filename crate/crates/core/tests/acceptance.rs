//! Acceptance suite: every check runs at desk scale over the presets
//! A1, GL2, A2, GL3, B2, G2 with exact (tolerance-zero) comparisons.
//! One pass/fail line per criterion (run with `--nocapture` to see them all).

use hecke_core::suites::{
    convention_suite, suite_associativity, suite_freeness, suite_im_coherence,
    suite_induction, suite_jacquet_spectrum, suite_lemma_modulus, suite_length_formula,
    suite_opposition, suite_parabolic_opposition, suite_presentation, suite_reeder_jantzen,
    SuiteConfig, SuiteReport,
};

const SEED: u64 = 20260809;

fn config() -> SuiteConfig {
    SuiteConfig { seed: SEED, ..SuiteConfig::default() }
}

fn report_line(criterion: &str, report: &SuiteReport) {
    println!(
        "acceptance {}: {}",
        criterion,
        if report.passed { "PASS" } else { "FAIL" }
    );
    if !report.passed {
        for r in &report.results {
            if !r.passed {
                println!("  {}: {:?}", r.scope, r.details);
            }
        }
    }
}

fn assert_report(criterion: &str, report: SuiteReport) {
    report_line(criterion, &report);
    assert!(report.passed, "{} failed: {:?}", criterion, report.results);
}

#[test]
fn criterion_01_presentation() {
    assert_report("01 presentation", suite_presentation(&config()));
}

#[test]
fn criterion_02_associativity() {
    assert_report("02 associativity", suite_associativity(&config()));
}

#[test]
fn criterion_03_im_coherence() {
    assert_report("03 im-coherence", suite_im_coherence(&config()));
}

#[test]
fn criterion_04_modulus_length() {
    assert_report("04 modulus-length", suite_lemma_modulus(&config()));
}

#[test]
fn criterion_05_opposition() {
    assert_report("05 opposition", suite_opposition(&config()));
}

#[test]
fn criterion_06_length_formula() {
    assert_report("06 length-formula", suite_length_formula(&config()));
}

#[test]
fn criterion_07_freeness() {
    assert_report("07 freeness", suite_freeness(&config()));
}

#[test]
fn criterion_08_parabolic_opposition() {
    assert_report("08 parabolic-opposition", suite_parabolic_opposition(&config()));
}

#[test]
fn criterion_09_induction() {
    assert_report("09 induction", suite_induction(&config()));
}

#[test]
fn criterion_10_jacquet_spectrum() {
    assert_report("10 jacquet-spectrum", suite_jacquet_spectrum(&config()));
}

#[test]
fn criterion_11_reeder_jantzen() {
    assert_report("11 reeder-jantzen", suite_reeder_jantzen(&config()));
}

#[test]
fn criterion_05b_convention_report() {
    // part of criterion 5: the convention report exists and carries a single
    // globally consistent variant assignment
    let (report, conventions) = convention_suite(&config());
    report_line("05b conventions", &report);
    assert!(report.passed);
    let global = conventions.global_assignment.expect("global assignment");
    assert_eq!(global["7.1 sandwich (star_b)"], "as_written");
    assert_eq!(global["7.1 sandwich (star_im)"], "mirrored");
    assert_eq!(global["7.3 parabolic opposition"], "as_written");
    assert_eq!(global["7.4 Reeder map"], "as_written");
    assert_eq!(global["7.5 Jantzen map"], "as_written");
    assert_eq!(global["7.6 twisted Jacquet action"], "as_written");
    assert_eq!(global["3.2 finite*translation additive"], "mirrored");
    assert_eq!(global["3.2 translation*finite additive"], "mirrored");
}
