import sys

from pastrami.cli import main

sys.exit(main())
