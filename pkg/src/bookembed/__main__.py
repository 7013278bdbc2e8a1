import sys

from bookembed.cli import main

sys.exit(main())
