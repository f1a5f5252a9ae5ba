from hodgekit import hodge, sweeps


def test_seed_from_environment(monkeypatch):
    monkeypatch.delenv("HODGEKIT_SEED", raising=False)
    assert sweeps.seed() == sweeps.DEFAULT_SEED
    monkeypatch.setenv("HODGEKIT_SEED", "7")
    assert sweeps.seed() == 7


def test_random_classes_reproducible(dt4):
    a = [sweeps.random_nef(dt4, sweeps.make_rng(3)) for _ in range(5)]
    b = [sweeps.random_nef(dt4, sweeps.make_rng(3)) for _ in range(5)]
    assert a == b
    assert all(dt4.is_nef(v) for v in a)


def test_random_interior_is_interior(u45, rng):
    for _ in range(3):
        assert u45.is_interior(sweeps.random_interior(u45, rng))


def test_critical_collections_dt4():
    found = sweeps.critical_collections_dt4()
    assert found and all(hodge.classify(c).status == hodge.CRITICAL for c in found)


def test_run_all_small():
    results = sweeps.run_all(trials=5, s=1)
    assert results and all(r.ok for r in results)
