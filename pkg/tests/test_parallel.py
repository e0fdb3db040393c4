from nonadditive import betazeta
from nonadditive._parallel import ENV_VAR, ordered_map, thread_count


def test_thread_count_reads_environment(monkeypatch):
    monkeypatch.delenv(ENV_VAR, raising=False)
    assert thread_count() == 1
    monkeypatch.setenv(ENV_VAR, "4")
    assert thread_count() == 4
    monkeypatch.setenv(ENV_VAR, "0")
    assert thread_count() == 1
    monkeypatch.setenv(ENV_VAR, "many")
    assert thread_count(default=2) == 2


def test_ordered_map_preserves_order():
    xs = list(range(50))
    assert ordered_map(lambda x: x * x, xs, threads=4) == [x * x for x in xs]


def test_monte_carlo_does_not_depend_on_thread_count(monkeypatch):
    monkeypatch.setenv(ENV_VAR, "1")
    one = betazeta.real_beta_integral(3, [2, 1, 1], method="mc", samples=40_000, seed=9)
    monkeypatch.setenv(ENV_VAR, "4")
    four = betazeta.real_beta_integral(3, [2, 1, 1], method="mc", samples=40_000, seed=9)
    assert one.value == four.value
