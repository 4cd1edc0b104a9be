import sys

from slopelim.cli import main

sys.exit(main())
