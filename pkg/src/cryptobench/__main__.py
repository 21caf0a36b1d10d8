import sys

from cryptobench.cli import main

sys.exit(main())
