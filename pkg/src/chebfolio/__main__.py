import sys

from chebfolio.cli import main

sys.exit(main())
