import sys

from clustergraph.cli import main

sys.exit(main())
