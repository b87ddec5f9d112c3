from nirp_sfc.cli.main import cli, main  # noqa: F401
