use std::fs;

use qtrace_core::cache::{file_name, load, store};
use qtrace_core::{Engine, QGFamily};

#[test]
fn stored_context_loads_back() {
    let dir = tempfile::tempdir().unwrap();
    let e = Engine::default();
    let ctx = e.context(QGFamily::SPlus, 4, 6).unwrap();
    let parts = e.partitions(QGFamily::SPlus.class(), 4).unwrap();
    let path = store(dir.path(), &ctx).unwrap();
    assert!(path.ends_with(file_name(QGFamily::SPlus, 4, 6)));
    let back = load(dir.path(), QGFamily::SPlus, 4, 6, &parts).unwrap();
    assert!(back.is_inverse_pair());
    assert_eq!(back.weingarten(), ctx.weingarten());
    assert!(load(dir.path(), QGFamily::SPlus, 4, 7, &parts).is_none());
}

#[test]
fn damaged_files_are_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    let warm = Engine::default().with_cache_dir(dir.path());
    let expected = warm.weingarten(QGFamily::HPlus, 4, 5).unwrap();
    let path = dir.path().join(file_name(QGFamily::HPlus, 4, 5));
    let parts = warm.partitions(QGFamily::HPlus.class(), 4).unwrap();

    let text = fs::read_to_string(&path).unwrap();
    let tampered = text.replacen("\"1/", "\"2/", 1);
    assert_ne!(text, tampered);
    fs::write(&path, tampered).unwrap();
    assert!(load(dir.path(), QGFamily::HPlus, 4, 5, &parts).is_none());

    fs::write(&path, "{not json").unwrap();
    assert!(load(dir.path(), QGFamily::HPlus, 4, 5, &parts).is_none());
    let fresh = Engine::default().with_cache_dir(dir.path());
    assert_eq!(fresh.weingarten(QGFamily::HPlus, 4, 5).unwrap(), expected);
    assert!(load(dir.path(), QGFamily::HPlus, 4, 5, &parts).is_some());
}
