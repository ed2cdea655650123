from flasque.cli import main
import sys
sys.exit(main())
