"""Environment configuration tests."""

from utils.config import THREADS_ENV, thread_limit


class TestThreadLimit:
    """Test the KM_LAB_THREADS lookup."""

    def test_default_is_one(self, monkeypatch):
        """Test that an unset variable gives a single worker."""
        monkeypatch.delenv(THREADS_ENV, raising=False)
        assert thread_limit() == 1

    def test_reads_integer(self, monkeypatch):
        """Test that an integer value is used."""
        monkeypatch.setenv(THREADS_ENV, "4")
        assert thread_limit() == 4

    def test_clamps_to_one(self, monkeypatch):
        """Test that zero and negative values fall back to one."""
        monkeypatch.setenv(THREADS_ENV, "-3")
        assert thread_limit() == 1

    def test_ignores_garbage(self, monkeypatch, caplog):
        """Test that a non-integer value is ignored with a warning."""
        monkeypatch.setenv(THREADS_ENV, "many")
        assert thread_limit() == 1
        assert "ignoring" in caplog.text
