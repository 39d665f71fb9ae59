from .__version import __version__  # noqa: F401
