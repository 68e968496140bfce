import sys

from basis_reconf.cli import main

sys.exit(main())
