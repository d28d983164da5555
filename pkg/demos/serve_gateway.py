"""Serve an engine over HTTP/WebSocket for remote control.

Try it with:
    curl http://127.0.0.1:8787/pipeline
    curl -X POST http://127.0.0.1:8787/nodes \
         -H 'content-type: application/json' \
         -d '{"factory": "parametric_curve_source"}'
    curl -X POST http://127.0.0.1:8787/nodes \
         -H 'content-type: application/json' -d '{"factory": "surface"}'
    curl 'http://127.0.0.1:8787/render?width=640&height=480' -o frame.png
"""

from vizpipe.gateway import serve

if __name__ == "__main__":
    serve(port=8787)
