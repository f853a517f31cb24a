// Source: real-world moby#33293, minimal reconstruction
// Expected: Deadlock
//
// The attach goroutine reports an error on errCh, but the caller returns
// after the wait channel fires and never drains errCh.
package main

import (
	"errors"
	"fmt"
)

type Error struct {
	msg string
}

type ExitStatus struct {
	code int
}

func attach(errCh chan Error) {
	err := errors.New("stream closed")
	errCh <- Error{msg: err.Error()}
}

func wait(waitCh chan ExitStatus) {
	waitCh <- ExitStatus{code: 0}
}

func main() {
	errCh := make(chan Error)
	waitCh := make(chan ExitStatus)
	go attach(errCh)
	go wait(waitCh)
	status := <-waitCh
	fmt.Println("container exited", status.code)
}
