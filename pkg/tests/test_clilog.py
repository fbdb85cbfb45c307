import clilog
from clilog import VERBOSITY_DEBUG, VERBOSITY_ERROR, VERBOSITY_INFO, VERBOSITY_TRACE, VERBOSITY_WARNING, log, parse_verbosity


def test_parse_verbosity():
    assert parse_verbosity("debug") == VERBOSITY_DEBUG
    assert parse_verbosity(" Trace ") == VERBOSITY_TRACE
    assert parse_verbosity("3") == VERBOSITY_DEBUG
    assert parse_verbosity(7) == VERBOSITY_TRACE
    assert parse_verbosity(-1) == VERBOSITY_ERROR
    assert parse_verbosity("loud") == VERBOSITY_WARNING
    assert parse_verbosity("loud", default=VERBOSITY_INFO) == VERBOSITY_INFO


def test_lines_go_to_stderr_by_verbosity(capsys, monkeypatch):
    monkeypatch.setattr(clilog, "VERBOSITY", VERBOSITY_INFO)
    monkeypatch.setattr(clilog, "write_to_file", False)
    log("[test_clilog.py.test] shown", VERBOSITY_WARNING)
    log("[test_clilog.py.test] hidden", VERBOSITY_DEBUG)
    out, err = capsys.readouterr()
    assert out == ""
    assert "[warn]" in err and "shown" in err
    assert "hidden" not in err
    # captured stderr is not a terminal
    assert "\033" not in err


def test_untagged_lines_raise_a_notice(capsys, monkeypatch):
    monkeypatch.setattr(clilog, "VERBOSITY", VERBOSITY_ERROR)
    monkeypatch.setattr(clilog, "write_to_file", False)
    log("no tag here", VERBOSITY_DEBUG)
    log("plain info line")
    err = capsys.readouterr().err
    assert err.count("[clilog]") == 1
    assert "no tag here" in err
    assert "plain info line" not in err


def test_set_verbosity_accepts_names(monkeypatch):
    monkeypatch.setattr(clilog, "VERBOSITY", VERBOSITY_WARNING)
    clilog.set_verbosity("trace")
    assert clilog.VERBOSITY == VERBOSITY_TRACE
    clilog.set_verbosity("nonsense")
    assert clilog.VERBOSITY == VERBOSITY_TRACE


def test_file_mirror_is_plain(monkeypatch, tmp_path):
    path = tmp_path / "logs" / "pg2q.log"
    monkeypatch.setattr(clilog, "log_file_path", path)
    monkeypatch.setattr(clilog, "write_to_file", True)
    monkeypatch.setattr(clilog, "VERBOSITY", VERBOSITY_INFO)
    log("[test_clilog.py.test] mirrored", VERBOSITY_WARNING)
    log("[test_clilog.py.test] filtered", VERBOSITY_TRACE)
    text = path.read_text(encoding="utf-8")
    assert "mirrored" in text and "filtered" not in text
    assert "\033" not in text
