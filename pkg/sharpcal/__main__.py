import sys

from sharpcal.cli import main


sys.exit(main())
