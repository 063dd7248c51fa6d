import sys

from flrcov.cli import main

sys.exit(main())
