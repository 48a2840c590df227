pytest_plugins = ("anthroscan.testutils.fixtures",)
