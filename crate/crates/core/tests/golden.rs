use std::fs;
use std::path::Path;

use hoprep_core::parser::parse_problem;
use hoprep_core::printer::print_problem;

/// Set `HOPREP_BLESS=1` to rewrite the expected files after an intended change.
fn check(name: &str) {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden");
    let input = fs::read_to_string(dir.join(format!("{name}.chol"))).unwrap();
    let printed = print_problem(&parse_problem(&input).unwrap());
    let expected_path = dir.join(format!("{name}.expected.chol"));
    if std::env::var_os("HOPREP_BLESS").is_some() {
        fs::write(&expected_path, &printed).unwrap();
    }
    let expected = fs::read_to_string(&expected_path).unwrap();
    assert_eq!(printed, expected, "{name}");
    assert_eq!(
        print_problem(&parse_problem(&printed).unwrap()),
        printed,
        "{name} is not a print fixpoint"
    );
}

#[test]
fn lambda_binders_are_canonical() {
    check("lambda");
}

#[test]
fn polymorphic_instances_keep_type_arguments() {
    check("poly");
}
