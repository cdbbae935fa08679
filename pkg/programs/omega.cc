-- Self-application has no type: sigma would have to equal sigma -> _|_.
name Omega : _|_ -> _|_
rule Omega.x -> x.x
