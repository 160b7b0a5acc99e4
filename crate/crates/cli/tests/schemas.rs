use std::path::{Path, PathBuf};
use std::process::Command;

use jsonschema::{Retrieve, Uri};
use serde_json::Value;

fn root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn load(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

/// Resolves `file:///schemas/<name>` to the shipped schema files.
struct SchemaDir;

impl Retrieve for SchemaDir {
    fn retrieve(&self, uri: &Uri<String>) -> Result<Value, Box<dyn std::error::Error + Send + Sync>> {
        let name = uri.path().as_str().trim_start_matches("/schemas/");
        Ok(load(&root().join("schemas").join(name)))
    }
}

fn validator(name: &str) -> jsonschema::Validator {
    let mut schema = load(&root().join("schemas").join(name));
    schema["$id"] = Value::String(format!("file:///schemas/{name}"));
    jsonschema::options().with_retriever(SchemaDir).build(&schema).unwrap()
}

fn assert_valid(schema: &str, doc: &Value) {
    let v = validator(schema);
    let errors: Vec<String> = v.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema}: {errors:?}\n{doc}");
}

#[test]
fn every_schema_is_a_valid_schema() {
    for entry in std::fs::read_dir(root().join("schemas")).unwrap() {
        let path = entry.unwrap().path();
        let name = path.file_name().unwrap().to_str().unwrap().to_string();
        validator(&name);
    }
}

#[test]
fn shipped_configs_match_their_schemas() {
    let cases = [
        ("simplex.schema.json", "simplex.json"),
        ("pointset.schema.json", "lattice_3z2.json"),
        ("pointset.schema.json", "lattice_2z2.json"),
        ("matrix.schema.json", "basis.json"),
        ("system.schema.json", "torus.json"),
        ("system.schema.json", "cyclic5.json"),
        ("system.schema.json", "cyclic5_line.json"),
        ("set.schema.json", "torus_B.json"),
        ("set.schema.json", "cyclic5_B.json"),
        ("set.schema.json", "cyclic5_line_B.json"),
        ("experiment.schema.json", "density_x_axis.json"),
        ("experiment.schema.json", "weyl_sqrt2_sqrt3.json"),
    ];
    for (schema, file) in cases {
        assert_valid(schema, &load(&root().join("configs").join(file)));
    }
}

#[test]
fn schemas_reject_malformed_documents() {
    let bad = [
        ("pointset.schema.json", r#"{"kind": "periodic", "m": 0, "residues": []}"#),
        ("pointset.schema.json", r#"{"kind": "lattice", "n": 2}"#),
        ("polynomial.schema.json", r#"{"coeffs": ["1", "3/0"]}"#),
        ("set.schema.json", r#"{"intervals": [["0"]]}"#),
        ("character.schema.json", r#"{"coords": [{"rat": "x"}]}"#),
        ("experiment.schema.json", r#"{"v": [1, 0], "N": 0, "M": 1}"#),
    ];
    for (schema, doc) in bad {
        let doc: Value = serde_json::from_str(doc).unwrap();
        assert!(!validator(schema).is_valid(&doc), "{schema} accepted {doc}");
    }
}

#[test]
fn emitted_manifest_and_polynomial_match_their_schemas() {
    let dir = tempfile::tempdir().unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_ehrlab"))
        .current_dir(root())
        .args(["--out", dir.path().to_str().unwrap(), "--format", "json", "ehrhart", "--simplex", "configs/simplex.json"])
        .status()
        .unwrap();
    assert!(status.success());
    assert_valid("manifest.schema.json", &load(&dir.path().join("manifest.json")));
    let out = load(&dir.path().join("ehrhart.json"));
    assert_valid("polynomial.schema.json", &out["summary"]["polynomial"]);
}
