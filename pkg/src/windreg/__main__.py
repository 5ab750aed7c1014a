"""``python -m windreg`` entry point."""

from windreg.core.cli.main import main

raise SystemExit(main())
